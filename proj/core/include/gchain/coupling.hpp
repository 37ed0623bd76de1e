#pragma once

#include "gchain/kernel.hpp"
#include "gchain/rng.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gchain {

/// One greedy-maximal coupled draw: marginals are exact (a ~ px, b ~ py) and
/// P(a = b) equals the overlap sum_s min(px, py) = 1 - d_TV/2. A single
/// uniform drives the draw: [0, overlap) selects the shared mass, the rest
/// selects both residuals at the same quantile (canonical symbol order).
std::pair<int, int> greedy_couple_step(std::span<const double> px,
                                       std::span<const double> py, RngStream& rng);

struct CoupledTrajectory {
    Past             past_x;
    Past             past_y;
    std::vector<int> symbols_x;
    std::vector<int> symbols_y;
    std::int64_t     last_disagreement = -1; // max{t : x_t != y_t}, -1 if none
    bool             coupled_at_horizon = false; // no disagreement in the last W steps
    std::string      model_ref;
};

/// Greedy stepwise coupling of the chains from past_x and past_y.
/// `trailing_window` W declares "coupled at horizon" when no disagreement
/// occurs in (T-W, T]; pass W <= 0 for the default T/4.
CoupledTrajectory couple_chains(const Kernel& kernel, const Past& past_x,
                                const Past& past_y, std::int64_t horizon,
                                std::int64_t trailing_window, RngStream rng);

/// Monte Carlo tail curve n -> estimate of P(Theta > n), where Theta is the
/// greedy coupling time: the fraction of replicas with a disagreement in
/// [n, T]. Disagreements after T are unobserved (censoring; the count of
/// replicas still disagreeing inside the trailing window is reported).
struct CouplingTailCurve {
    std::vector<std::int64_t> horizons;
    std::vector<double>       tail_estimate;
    std::vector<double>       ci_low;  // Wilson 95%
    std::vector<double>       ci_high;
    std::int64_t              replicas = 0;
    std::int64_t              horizon_T = 0;
    std::int64_t              trailing_window = 0;
    std::int64_t              censored = 0;
    std::string               model_ref;
};

CouplingTailCurve coupling_time_tail(const Kernel& kernel, const Past& past_x,
                                     const Past& past_y,
                                     std::vector<std::int64_t> horizons,
                                     std::int64_t horizon_T, std::int64_t trailing_window,
                                     std::int64_t replicas, RngStream rng,
                                     unsigned workers = 1);

} // namespace gchain
