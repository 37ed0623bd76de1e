#pragma once

#include "gchain/kernel.hpp"

#include <cstdint>
#include <vector>

namespace gchain {

struct OracleStats {
    std::uint64_t paths        = 0;
    std::uint64_t evals        = 0;
    double        wall_seconds = 0.0;
};

struct OracleBudget {
    std::uint64_t max_paths = std::uint64_t{1} << 24;
    unsigned      workers   = 1;
};

/// Exact law of (X_{t0}, ..., X_{t1}) under the chain started from `past`,
/// by full path enumeration over S^{t1+1} with prefix-product reuse.
/// probs is indexed lexicographically with the t0 coordinate most
/// significant.
struct WindowLaw {
    Past                past;
    std::int64_t        t0 = 0;
    std::int64_t        t1 = 0;
    std::vector<double> probs;
    OracleStats         stats;
};

WindowLaw exact_window_law(const Kernel& kernel, const Past& past, std::int64_t t0,
                           std::int64_t t1, const OracleBudget& budget = {});

/// sup_B |P^x[B] - P^y[B]| over the window sigma-algebra: half the L1
/// distance of the two window laws. (The d_TV convention with the factor 2
/// is NOT used here; this returns the sup_B form.)
double exact_window_tv(const Kernel& kernel, const Past& past_x, const Past& past_y,
                       std::int64_t t0, std::int64_t t1, const OracleBudget& budget = {});

/// Per-step weak-l2 increments Delta_n = sum_a (g(a w_0^{n-1} x) -
/// g(a w_0^{n-1} y))^2 under w ~ P^x, by exact enumeration: increment n
/// compares the conditionals after n generated symbols, so Delta_0 is the
/// pair of base conditionals. cumulative_means[N] = E[D_N].
struct WeakL2Exact {
    std::vector<double> increment_means;  // E[Delta_n], n = 0..N
    std::vector<double> cumulative_means; // E[D_n]
    OracleStats         stats;
};

WeakL2Exact exact_weak_l2_expectation(const Kernel& kernel, const Past& past_x,
                                      const Past& past_y, std::int64_t n_max,
                                      const OracleBudget& budget = {});

/// Per-n expectations of the Hellinger increments d_n = sum_a (sqrt g_x -
/// sqrt g_y)^2 together with the squared-difference increments and the worst
/// violation of the sandwich 4 gamma d_n <= increment <= 4 (1-gamma) d_n
/// over every enumerated path.
struct HellingerExact {
    std::vector<double> d_means;
    std::vector<double> increment_means;
    double              max_sandwich_violation = 0.0;
    OracleStats         stats;
};

HellingerExact exact_hellinger_increments(const Kernel& kernel, const Past& past_x,
                                          const Past& past_y, std::int64_t n_max,
                                          const OracleBudget& budget = {});

} // namespace gchain
