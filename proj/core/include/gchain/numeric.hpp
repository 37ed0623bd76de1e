#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gchain {

/// Neumaier-compensated accumulator. Long partial-sum curves (10^6 terms and
/// more) are accumulated through this instead of a bare double.
class CompensatedSum {
  public:
    CompensatedSum() = default;
    explicit CompensatedSum(double x) : sum_(x) {}

    void add(double x) noexcept
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) { comp_ += (sum_ - t) + x; }
        else { comp_ += (x - t) + sum_; }
        sum_ = t;
    }

    CompensatedSum& operator+=(double x) noexcept
    {
        add(x);
        return *this;
    }

    double value() const noexcept { return sum_ + comp_; }

  private:
    double sum_  = 0.0;
    double comp_ = 0.0;
};

/// Hurwitz zeta zeta(s, q) = sum_{k>=0} (q+k)^-s for s > 1, q > 0,
/// via Euler-Maclaurin. `error` (optional) receives a bound on the
/// absolute truncation error of the expansion (<= ~1e-13 for s in (1, 8]).
double hurwitz_zeta(double s, double q, double* error = nullptr);

/// sum_{i>=0} (first + i*step)^-s, s > 1, first > 0, step > 0.
double arithmetic_power_tail(double first, double step, double s,
                             double* error = nullptr);

/// Certified bracket for sum_{n>from} c * n^-s (c > 0, s > 1, from >= 1)
/// from the integral test: lo <= tail <= hi.
struct TailBracket {
    double lo = 0.0;
    double hi = 0.0;
};
TailBracket power_law_tail_bracket(double c, double s, std::int64_t from);

/// Least-squares slope of log(y) against log(x) over the given points.
/// Points with y <= 0 are skipped; returns 0 when fewer than two remain.
double log_log_slope(std::span<const double> x, std::span<const double> y);

/// Pool-adjacent-violators: least-squares nonincreasing fit of y.
std::vector<double> isotonic_nonincreasing(std::span<const double> y);

/// Ordinary least squares y ~ a + b x; returns {a, b}.
struct LinearFit {
    double intercept = 0.0;
    double slope     = 0.0;
};
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

} // namespace gchain
