#pragma once

#include "gchain/kernel.hpp"
#include "gchain/models.hpp"
#include "gchain/numeric.hpp"
#include "gchain/rng.hpp"

#include <cmath>
#include <vector>

namespace gchain::testing {

inline Past random_past(RngStream& rng, int base, std::int64_t max_suffix = 6,
                        std::int64_t max_period = 4)
{
    std::vector<int> suffix, tail;
    const auto       sl = rng.next_u64() % static_cast<std::uint64_t>(max_suffix + 1);
    const auto       tp = 1 + rng.next_u64() % static_cast<std::uint64_t>(max_period);
    for (std::uint64_t i = 0; i < sl; ++i) {
        suffix.push_back(static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(base)));
    }
    for (std::uint64_t i = 0; i < tp; ++i) {
        tail.push_back(static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(base)));
    }
    return Past(std::move(suffix), std::move(tail));
}

inline double logit(double r) { return 1.0 / (1.0 + std::exp(-2.0 * r)); }

/// The l2-dichotomy Ising kernel: beta_j = c / j^(1+eps) with total mass.
inline ArParams ising_params(double eps, double total, double delta = 0.0)
{
    ArParams p;
    p.phi          = PhiSpec::logit();
    const double c = total / hurwitz_zeta(1.0 + eps, 1.0);
    p.beta         = BetaSequence({}, PowerLawTail{c, 1.0 + eps, 1});
    p.delta        = delta;
    return p;
}

inline RenewalParams renewal_power_params()
{
    RenewalParams p;
    p.q_inf     = 0.5;
    p.tail_kind = RenewalParams::TailKind::power;
    p.a         = 0.3;
    p.theta     = 1.0;
    return p;
}

/// Row-stochastic order-1 chain on {-1,+1}.
inline FiniteMemoryParams markov_params(double stay_minus, double stay_plus)
{
    FiniteMemoryParams p;
    p.order = 1;
    p.table = {stay_minus, 1.0 - stay_minus, 1.0 - stay_plus, stay_plus};
    return p;
}

} // namespace gchain::testing
