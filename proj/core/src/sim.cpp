#include "gchain/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gchain {

int draw_symbol(std::span<const double> dist, RngStream& rng)
{
    const double u   = rng.next_double();
    double       cum = 0.0;
    const int    B   = static_cast<int>(dist.size());
    for (int a = 0; a < B; ++a) {
        cum += dist[static_cast<std::size_t>(a)];
        if (u < cum) { return a; }
    }
    return B - 1; // u landed in the rounding slack at the top
}

Trajectory sample_chain(const Kernel& kernel, const Past& past, std::int64_t horizon,
                        RngStream rng)
{
    if (horizon < 0) { throw std::invalid_argument("sample_chain: horizon must be >= 0"); }
    Trajectory out;
    out.origin    = past;
    out.model_ref = kernel.id_hash();
    out.symbols.reserve(static_cast<std::size_t>(horizon) + 1);

    auto                stepper = kernel.stepper(past, horizon + 1);
    const int           B       = kernel.alphabet().size();
    std::vector<double> dist(static_cast<std::size_t>(B));
    for (std::int64_t t = 0; t <= horizon; ++t) {
        stepper->dist(dist);
        const int s = draw_symbol(dist, rng);
        stepper->push(s);
        out.symbols.push_back(s);
    }
    return out;
}

Past sample_stationary_past(const Kernel& kernel, std::int64_t burn_in,
                            std::int64_t suffix_len, const Past& initial, RngStream rng)
{
    if (suffix_len < 0) {
        throw std::invalid_argument("sample_stationary_past: suffix_len must be >= 0");
    }
    if (burn_in < suffix_len) {
        throw std::invalid_argument("sample_stationary_past: need burn_in >= suffix_len");
    }
    const Trajectory run = sample_chain(kernel, initial, burn_in - 1, std::move(rng));
    std::vector<int> suffix;
    suffix.reserve(static_cast<std::size_t>(suffix_len));
    for (std::int64_t i = 0; i < suffix_len; ++i) {
        suffix.push_back(run.symbols[static_cast<std::size_t>(burn_in - 1 - i)]);
    }
    return Past(std::move(suffix),
                std::vector<int>(initial.tail().begin(), initial.tail().end()));
}

BurnIn default_burn_in(const Kernel& kernel, std::int64_t cap)
{
    BurnIn       b;
    const double scale = 10.0 * kernel.memory_scale();
    if (scale >= static_cast<double>(cap)) {
        b.steps  = cap;
        b.capped = true;
    }
    else {
        b.steps = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(scale)));
    }
    return b;
}

} // namespace gchain
