#pragma once

#include "gchain/coupling.hpp"
#include "gchain/kernel.hpp"
#include "gchain/rng.hpp"
#include "gchain/series.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gchain {

struct CurveStat {
    double mean   = 0.0;
    double sd     = 0.0;
    double q25    = 0.0;
    double median = 0.0;
    double q75    = 0.0;
};

/// Geometric checkpoint grid on [1, n_max] (always contains 1 and n_max).
std::vector<std::int64_t> log_checkpoints(std::int64_t n_max, int per_decade = 8);

// ---------------------------------------------------------------------------
// Weak-l2 partial-sum growth along simulated trajectories
// ---------------------------------------------------------------------------

struct WeakL2Options {
    std::int64_t              horizon  = 1024; // N
    std::int64_t              replicas = 200;
    std::vector<std::int64_t> checkpoints;     // empty: log grid on [1, N]
    unsigned                  workers = 1;
    SeriesPolicy              policy;
    bool                      keep_replica_curves = true;
};

struct WeakL2Curve {
    std::vector<std::int64_t>        horizons;
    std::vector<std::vector<double>> per_replica; // [replica][checkpoint] D_N
    std::vector<CurveStat>           summary;     // per checkpoint
    SeriesClassification             median_series;
    Verdict                          verdict = Verdict::inconclusive;
    /// max over replicas/checkpoints of D_N - 2(N+1) (binary kernels keep
    /// this <= 0; recorded as a sanity margin).
    double      trivial_bound_margin = 0.0;
    std::string model_ref;
};

/// D_N(w; x, y) = sum_{n<=N} sum_a (g(a w_0^n x) - g(a w_0^n y))^2 along
/// w ~ P^x, per replica, with growth classification of the median curve.
WeakL2Curve weak_l2_curve(const Kernel& kernel, const Past& past_x, const Past& past_y,
                          const WeakL2Options& options, RngStream rng);

// ---------------------------------------------------------------------------
// P-weak-l2: the same statistic over sampled stationary past pairs
// ---------------------------------------------------------------------------

struct PWeakL2Options {
    WeakL2Options per_pair;
    std::int64_t  pairs      = 16;
    std::int64_t  burn_in    = 2048;
    std::int64_t  suffix_len = 256;
    Past          initial    = Past::all(1);
};

struct PWeakL2Result {
    std::vector<std::int64_t>        horizons;
    std::vector<Verdict>             pair_verdicts;
    std::vector<double>              pair_slopes;
    std::vector<std::vector<double>> pair_medians; // [pair][checkpoint]
    std::int64_t                     bounded = 0, divergent = 0, inconclusive = 0;
    std::int64_t                     burn_in = 0, suffix_len = 0; // approximation caveat
    std::string                      model_ref;
};

PWeakL2Result p_weak_l2_curve(const Kernel& kernel, const PWeakL2Options& options,
                              RngStream rng);

// ---------------------------------------------------------------------------
// Window TV estimation (shared by the TV-decay and beta-mixing curves)
// ---------------------------------------------------------------------------

struct WindowTvMcOptions {
    std::vector<std::int64_t> horizons;
    std::int64_t              window_w = 4; // window [n, n+w], w+1 coordinates
    std::int64_t              replicas = 10000;
    unsigned                  workers  = 1;
};

/// Monte Carlo window TV between P^x and P^y on [n, n+w]: per simulated
/// prefix the exact conditional window products are averaged (replicas use
/// common random numbers across the two pasts), then half the L1 distance of
/// the two estimated window laws is taken. bias_bound is an upper estimate
/// of the |.|-induced inflation from the per-cell Monte Carlo noise.
struct WindowTvMcResult {
    std::vector<double> tv;
    std::vector<double> bias_bound;
};

WindowTvMcResult window_tv_mc(const Kernel& kernel, const Past& past_x,
                              const Past& past_y, const WindowTvMcOptions& options,
                              RngStream rng);

// ---------------------------------------------------------------------------
// TV decay: exact / Monte Carlo / coupling-bound bracketing
// ---------------------------------------------------------------------------

struct TvDecayOptions {
    std::vector<std::int64_t> horizons;
    std::int64_t              window_w          = 4;
    std::int64_t              mc_replicas       = 10000;
    std::int64_t              coupling_replicas = 10000;
    std::int64_t              coupling_T        = -1; // default max(horizons)+w+1+W
    std::int64_t              coupling_W        = -1; // default T/4
    std::uint64_t             oracle_paths      = std::uint64_t{1} << 24;
    unsigned                  workers           = 1;
};

struct TvDecayCurve {
    std::vector<std::int64_t> horizons;
    std::vector<double>       exact_tv; // NaN where the path budget is exceeded
    std::vector<bool>         exact_ok;
    bool                      degraded = false; // some exact entries missing
    std::vector<double>       mc_tv;
    std::vector<double>       mc_bias_bound;
    CouplingTailCurve         coupling;
    std::string               model_ref;
};

TvDecayCurve tv_decay_curve(const Kernel& kernel, const Past& past_x, const Past& past_y,
                            const TvDecayOptions& options, RngStream rng);

// ---------------------------------------------------------------------------
// beta-mixing proxy over stationary past pairs
// ---------------------------------------------------------------------------

struct BetaMixingOptions {
    std::vector<std::int64_t> horizons;
    std::int64_t              window_w        = 3;
    std::int64_t              pairs           = 16;
    std::int64_t              prefix_replicas = 20000;
    std::int64_t              burn_in         = 2048;
    std::int64_t              suffix_len      = 256;
    Past                      initial         = Past::all(1);
    unsigned                  workers         = 1;
};

struct BetaMixingCurve {
    std::vector<std::int64_t>        horizons;
    std::vector<double>              beta_raw;      // mean over pairs of window TV
    std::vector<double>              beta_isotonic; // nonincreasing projection
    std::vector<double>              se;            // across-pair standard error
    std::vector<double>              ci_low, ci_high;
    std::vector<std::vector<double>> per_pair;
    std::int64_t                     pairs = 0, burn_in = 0, suffix_len = 0;
    std::string                      model_ref;
};

BetaMixingCurve beta_mixing_curve(const Kernel& kernel, const BetaMixingOptions& options,
                                  RngStream rng);

// ---------------------------------------------------------------------------
// Two-point correlation decay
// ---------------------------------------------------------------------------

struct CorrelationOptions {
    std::int64_t j_max         = 256;
    std::int64_t sample_length = 4096;
    std::int64_t replicas      = 64;
    std::int64_t burn_in       = 2048;
    Past         initial       = Past::all(1);
    unsigned     workers       = 1;
    SeriesPolicy policy;
};

struct CorrelationCurve {
    std::vector<double>  gamma_hat; // j = 0..j_max
    std::vector<double>  se;
    std::vector<double>  abs_partial_sums; // sum_{j<=J} |gamma_hat_j|
    SeriesClassification summability;
    double               fitted_exponent  = 0.0; // |gamma_j| ~ pref (1+j)^-exponent
    double               fitted_prefactor = 0.0;
    std::int64_t         fit_points       = 0;
    std::int64_t         burn_in          = 0;
    std::string          model_ref;
};

CorrelationCurve correlation_curve(const Kernel& kernel, const CorrelationOptions& options,
                                   RngStream rng);

} // namespace gchain
