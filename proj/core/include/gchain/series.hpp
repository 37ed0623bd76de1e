#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gchain {

enum class Verdict { convergent, divergent, inconclusive };

const char* to_string(Verdict v) noexcept;

/// Thresholds for growth-based verdicts on partial-sum curves. The slope is
/// the log-log fitted growth exponent over the last decade of the horizon;
/// defaults separate Theta(1) from Theta(N^0.4) growth at desk scale.
struct SeriesPolicy {
    double convergent_slope = 0.05;
    double divergent_slope  = 0.20;
    double growth_factor    = 2.0; // required sum growth across the fit window
};

/// Partial sums of a nonnegative-term series together with the evidence for
/// its convergence verdict. Analytic certificates, when a family provides
/// them, take precedence over the fitted slope.
struct SeriesClassification {
    std::vector<double> horizons;     // N values, increasing
    std::vector<double> partial_sums; // S_N, same length

    std::optional<double> analytic_tail_bound; // certified remainder beyond horizon
    bool                  certified_divergent = false;
    std::string           certificate;         // what the certificate says

    double  fitted_slope = 0.0;
    Verdict verdict      = Verdict::inconclusive;
    bool    certified    = false; // verdict backed by a certificate, not the slope

    /// Total including the certified remainder (when convergent-certified).
    std::optional<double> certified_total() const;
};

/// Fit the slope and decide the verdict. `partial_sums` must be the running
/// sums of nonnegative terms on the given horizons.
SeriesClassification classify_series(std::vector<double>   horizons,
                                     std::vector<double>   partial_sums,
                                     const SeriesPolicy&   policy = {},
                                     std::optional<double> analytic_tail_bound = std::nullopt,
                                     bool                  certified_divergent = false,
                                     std::string           certificate = {});

} // namespace gchain
