#include "gchain/series.hpp"

#include "gchain/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gchain {

const char* to_string(Verdict v) noexcept
{
    switch (v) {
    case Verdict::convergent: return "convergent";
    case Verdict::divergent: return "divergent";
    default: return "inconclusive";
    }
}

std::optional<double> SeriesClassification::certified_total() const
{
    if (!analytic_tail_bound.has_value() || partial_sums.empty()) { return std::nullopt; }
    return partial_sums.back() + *analytic_tail_bound;
}

SeriesClassification classify_series(std::vector<double> horizons,
                                     std::vector<double> partial_sums,
                                     const SeriesPolicy& policy,
                                     std::optional<double> analytic_tail_bound,
                                     bool certified_divergent,
                                     std::string certificate)
{
    if (horizons.size() != partial_sums.size()) {
        throw std::invalid_argument("classify_series: horizon/sum length mismatch");
    }
    SeriesClassification c;
    c.horizons            = std::move(horizons);
    c.partial_sums        = std::move(partial_sums);
    c.analytic_tail_bound = analytic_tail_bound;
    c.certified_divergent = certified_divergent;
    c.certificate         = std::move(certificate);

    double window_growth = 1.0;
    if (!c.horizons.empty()) {
        // Fit over the last decade of N.
        const double n_max  = c.horizons.back();
        std::size_t  first  = 0;
        while (first + 1 < c.horizons.size() && c.horizons[first] * 10.0 < n_max) { ++first; }
        const auto nx = std::span<const double>(c.horizons).subspan(first);
        const auto ny = std::span<const double>(c.partial_sums).subspan(first);
        c.fitted_slope = log_log_slope(nx, ny);
        if (ny.front() > 0.0) { window_growth = ny.back() / ny.front(); }
    }

    const bool all_zero = std::all_of(c.partial_sums.begin(), c.partial_sums.end(),
                                      [](double s) { return s == 0.0; });
    const bool monotone = std::is_sorted(c.partial_sums.begin(), c.partial_sums.end());

    if (certified_divergent) {
        c.verdict   = Verdict::divergent;
        c.certified = true;
    }
    else if (analytic_tail_bound.has_value() && std::isfinite(*analytic_tail_bound)) {
        c.verdict   = Verdict::convergent;
        c.certified = true;
    }
    else if (all_zero || c.fitted_slope <= policy.convergent_slope) {
        c.verdict = Verdict::convergent;
    }
    else if (c.fitted_slope >= policy.divergent_slope && monotone
             && window_growth >= policy.growth_factor) {
        c.verdict = Verdict::divergent;
    }
    else {
        c.verdict = Verdict::inconclusive;
    }
    return c;
}

} // namespace gchain
