#pragma once

#include "gchain/kernel.hpp"
#include "gchain/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gchain {

struct Trajectory {
    Past             origin;
    std::vector<int> symbols; // w_0 .. w_T
    std::string      model_ref;
};

/// Draw w_0..w_T sequentially, w_t ~ g(. | w_0^{t-1} past), by inverse CDF
/// in canonical symbol order.
Trajectory sample_chain(const Kernel& kernel, const Past& past, std::int64_t horizon,
                        RngStream rng);

/// Draw the next symbol from `dist` by inverse CDF in canonical order.
int draw_symbol(std::span<const double> dist, RngStream& rng);

/// Approximate stationary past: run the chain `burn_in` steps from `initial`
/// and keep the last `suffix_len` symbols as the new suffix; the tail pattern
/// of `initial` is kept beyond. The (burn_in, suffix_len) pair must travel
/// with any consumer so the approximation caveat can be stated.
Past sample_stationary_past(const Kernel& kernel, std::int64_t burn_in,
                            std::int64_t suffix_len, const Past& initial, RngStream rng);

/// Default burn-in: 10 x the model memory scale, capped (power-law tails can
/// make the formula astronomically large; `capped` reports that).
struct BurnIn {
    std::int64_t steps  = 0;
    bool         capped = false;
};
BurnIn default_burn_in(const Kernel& kernel, std::int64_t cap = 1 << 20);

} // namespace gchain
