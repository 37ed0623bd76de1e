#pragma once

#include "gchain/kernel.hpp"
#include "gchain/series.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gchain {

/// var_k(g): worst change of g over pasts agreeing on the last k symbols.
/// Exact when the family supplies a closed form, or when it is attractive and
/// binary and the prefix enumeration fits the exhaustive budget (the constant
/// extremal pasts are then exact maximizers); otherwise a flagged lower bound
/// from randomized search.
SearchResult variation_rate(const Kernel& kernel, std::int64_t k,
                            const SearchBudget& budget);

/// osc_k(g): sum over symbols of the worst single-flip change at lag k.
SearchResult oscillation(const Kernel& kernel, std::int64_t k,
                         const SearchBudget& budget);

/// One-sided Dobrushin condition. Two normalizations are computed:
///   - oscillation_series: partial sums of osc_k exactly as defined above;
///   - coefficient_series: partial sums of the interdependence coefficients
///     sup (1/2) sum_a |g(a..b..) - g(a..b'..)| (= osc_k / 2 for binary
///     antisymmetric kernels), which is the quantity the uniqueness
///     criterion compares against 1.
struct DobrushinReport {
    enum class Status { satisfied, violated, inconclusive };

    SeriesClassification oscillation_series;
    SeriesClassification coefficient_series;

    /// Upper bounds on the full sums (computed range + certified tail).
    std::optional<double> oscillation_total_upper;
    std::optional<double> coefficient_total_upper;

    Status      status = Status::inconclusive;
    std::string note;

    const char* status_string() const noexcept;
};

DobrushinReport dobrushin_sum(const Kernel& kernel, std::int64_t k_max,
                              const SearchBudget& budget);

/// Partial sums of var_k^2 with family certification where available.
struct Ell2Report {
    SeriesClassification series;
    std::vector<double>  var_values; // per-k var_k values entering the sums
    std::vector<bool>    var_exact;  // per-k exactness flags
    std::string          value_note; // how the values were obtained
};

Ell2Report ell2_criterion(const Kernel& kernel, std::int64_t k_max,
                          const SearchBudget& budget);

} // namespace gchain
