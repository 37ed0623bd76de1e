#include "gchain/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gchain {

namespace {

// B_2, B_4, ..., B_12 over (2j)!.
constexpr double kBernoulliOverFact[] = {
    1.0 / 12.0,                 // B2/2!
    -1.0 / 720.0,               // B4/4!
    1.0 / 30240.0,              // B6/6!
    -1.0 / 1209600.0,           // B8/8!
    1.0 / 47900160.0,           // B10/10!
    -691.0 / 1307674368000.0,   // B12/12!
};

} // namespace

double hurwitz_zeta(double s, double q, double* error)
{
    if (!(s > 1.0)) { throw std::invalid_argument("hurwitz_zeta: need s > 1"); }
    if (!(q > 0.0)) { throw std::invalid_argument("hurwitz_zeta: need q > 0"); }

    // Shift q upward so the asymptotic part is well inside its region of
    // rapid convergence, summing the skipped terms directly.
    CompensatedSum direct;
    double a     = q;
    int    shift = 0;
    while (a < 24.0 && shift < 4096) {
        direct.add(std::pow(a, -s));
        a += 1.0;
        ++shift;
    }

    const double a1s = std::pow(a, 1.0 - s);
    CompensatedSum em(a1s / (s - 1.0));
    em.add(0.5 * std::pow(a, -s));

    // sum_j B_2j/(2j)! * (s)(s+1)...(s+2j-2) * a^{-s-2j+1}
    double rising = s;            // (s)(s+1)...(s+2j-2), starts at j=1 -> s
    double apow   = std::pow(a, -s - 1.0);
    double last   = 0.0;
    for (std::size_t j = 0; j < std::size(kBernoulliOverFact); ++j) {
        last = kBernoulliOverFact[j] * rising * apow;
        em.add(last);
        rising *= (s + 2.0 * j + 1.0) * (s + 2.0 * j + 2.0);
        apow /= a * a;
    }
    if (error != nullptr) {
        // The remainder of the Euler-Maclaurin expansion is bounded by the
        // magnitude of the first omitted term for real s > 0.
        *error = std::abs(kBernoulliOverFact[std::size(kBernoulliOverFact) - 1]
                          * rising * apow);
    }
    return direct.value() + em.value();
}

double arithmetic_power_tail(double first, double step, double s, double* error)
{
    if (!(first > 0.0) || !(step > 0.0)) {
        throw std::invalid_argument("arithmetic_power_tail: need first, step > 0");
    }
    const double scale = std::pow(step, -s);
    double zerr = 0.0;
    const double z = hurwitz_zeta(s, first / step, &zerr);
    if (error != nullptr) { *error = scale * zerr; }
    return scale * z;
}

TailBracket power_law_tail_bracket(double c, double s, std::int64_t from)
{
    if (from < 1) { throw std::invalid_argument("power_law_tail_bracket: from >= 1"); }
    TailBracket b;
    const double n = static_cast<double>(from);
    b.hi = c / (s - 1.0) * std::pow(n, 1.0 - s);
    b.lo = c / (s - 1.0) * std::pow(n + 1.0, 1.0 - s);
    return b;
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y)
{
    const std::size_t n = std::min(x.size(), y.size());
    if (n < 2) { return {}; }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double d = n * sxx - sx * sx;
    if (d == 0.0) { return {sy / n, 0.0}; }
    LinearFit f;
    f.slope     = (n * sxy - sx * sy) / d;
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

double log_log_slope(std::span<const double> x, std::span<const double> y)
{
    std::vector<double> lx, ly;
    const std::size_t n = std::min(x.size(), y.size());
    lx.reserve(n);
    ly.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i] > 0.0 && y[i] > 0.0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    }
    if (lx.size() < 2) { return 0.0; }
    return least_squares(lx, ly).slope;
}

std::vector<double> isotonic_nonincreasing(std::span<const double> y)
{
    // PAVA on the negated sequence gives the nonincreasing projection.
    struct Block {
        double      sum;
        std::size_t count;
    };
    std::vector<Block> blocks;
    blocks.reserve(y.size());
    for (double v : y) {
        blocks.push_back({v, 1});
        while (blocks.size() >= 2) {
            const auto& a = blocks[blocks.size() - 2];
            const auto& b = blocks.back();
            if (a.sum / a.count >= b.sum / b.count) { break; }
            Block merged{a.sum + b.sum, a.count + b.count};
            blocks.pop_back();
            blocks.back() = merged;
        }
    }
    std::vector<double> out;
    out.reserve(y.size());
    for (const auto& b : blocks) {
        const double level = b.sum / b.count;
        for (std::size_t i = 0; i < b.count; ++i) { out.push_back(level); }
    }
    return out;
}

} // namespace gchain
