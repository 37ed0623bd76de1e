#include "gchain/models.hpp"
#include "gchain/numeric.hpp"

#include <benchmark/benchmark.h>

#include <array>

namespace {

using namespace gchain;

std::shared_ptr<const Kernel> ising_kernel(double eps)
{
    ArParams p;
    p.phi  = PhiSpec::logit();
    p.beta = BetaSequence({}, PowerLawTail{0.9 / hurwitz_zeta(1.0 + eps, 1.0),
                                           1.0 + eps, 1});
    return make_ar_kernel(std::move(p));
}

void BM_ArEval(benchmark::State& state)
{
    const auto kernel = ising_kernel(0.3);
    const Past past({1, 0, 1, 1, 0, 0, 1, 0}, {0, 1});
    for (auto _ : state) { benchmark::DoNotOptimize(kernel->eval(1, past)); }
}
BENCHMARK(BM_ArEval);

void BM_BkfEval(benchmark::State& state)
{
    BkfParams p;
    p.m      = {1, 5, 25, 125};
    p.lambda = {0.4, 0.3, 0.2, 0.1};
    p.psi    = PsiSpec::linear(0.2);
    const auto kernel = make_bkf_kernel(std::move(p));
    const Past past({1, 0, 1}, {0, 0, 1});
    for (auto _ : state) { benchmark::DoNotOptimize(kernel->eval(1, past)); }
}
BENCHMARK(BM_BkfEval);

void BM_RenewalEval(benchmark::State& state)
{
    RenewalParams p;
    p.q_inf     = 0.5;
    p.tail_kind = RenewalParams::TailKind::power;
    p.a         = 0.3;
    p.theta     = 1.0;
    const auto kernel = make_renewal_kernel(std::move(p));
    const Past past({0, 0, 0, 1}, {0});
    for (auto _ : state) { benchmark::DoNotOptimize(kernel->eval(1, past)); }
}
BENCHMARK(BM_RenewalEval);

/// Stepper distribution cost at a given history depth (the autoregressive
/// field dot product dominates).
void BM_ArStepperDist(benchmark::State& state)
{
    const auto kernel = ising_kernel(0.3);
    const auto depth  = state.range(0);
    auto       st     = kernel->stepper(Past::all(1), depth + 1);
    for (std::int64_t t = 0; t < depth; ++t) { st->push(static_cast<int>(t & 1)); }
    std::array<double, 2> dist{};
    for (auto _ : state) {
        st->dist(dist);
        benchmark::DoNotOptimize(dist);
    }
    state.SetItemsProcessed(state.iterations() * depth);
}
BENCHMARK(BM_ArStepperDist)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_ArPairStepperDists(benchmark::State& state)
{
    const auto kernel = ising_kernel(0.3);
    const auto depth  = state.range(0);
    auto       pair   = kernel->pair_stepper(Past::all(1), Past::all(0), depth + 1);
    for (std::int64_t t = 0; t < depth; ++t) { pair->push(static_cast<int>(t & 1)); }
    std::array<double, 2> dx{}, dy{};
    for (auto _ : state) {
        pair->dists(dx, dy);
        benchmark::DoNotOptimize(dx);
        benchmark::DoNotOptimize(dy);
    }
    state.SetItemsProcessed(state.iterations() * depth);
}
BENCHMARK(BM_ArPairStepperDists)->Arg(10000)->Arg(100000);

void BM_HurwitzZeta(benchmark::State& state)
{
    double q = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(hurwitz_zeta(1.3, q));
        q += 1.0;
        if (q > 512.0) { q = 1.0; }
    }
}
BENCHMARK(BM_HurwitzZeta);

} // namespace
