#include "gchain/numeric.hpp"
#include "gchain/coupling.hpp"
#include "gchain/models.hpp"
#include "gchain/sim.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace gchain;

void BM_SampleChainRenewal(benchmark::State& state)
{
    RenewalParams p;
    p.q_inf     = 0.5;
    p.tail_kind = RenewalParams::TailKind::power;
    p.a         = 0.3;
    p.theta     = 1.0;
    const auto kernel = make_renewal_kernel(std::move(p));
    const auto T      = state.range(0);
    std::uint64_t r   = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_chain(*kernel, Past::all(1), T, RngStream(7, r++)));
    }
    state.SetItemsProcessed(state.iterations() * (T + 1));
}
BENCHMARK(BM_SampleChainRenewal)->Arg(1000)->Arg(100000);

void BM_SampleChainAr(benchmark::State& state)
{
    ArParams p;
    p.phi  = PhiSpec::logit();
    p.beta = BetaSequence({}, PowerLawTail{0.9 / hurwitz_zeta(1.3, 1.0), 1.3, 1});
    const auto kernel = make_ar_kernel(std::move(p));
    const auto T      = state.range(0);
    std::uint64_t r   = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_chain(*kernel, Past::all(1), T, RngStream(7, r++)));
    }
    state.SetItemsProcessed(state.iterations() * (T + 1));
}
BENCHMARK(BM_SampleChainAr)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_CoupleChainsRenewal(benchmark::State& state)
{
    RenewalParams p;
    p.q_inf     = 0.5;
    p.tail_kind = RenewalParams::TailKind::power;
    p.a         = 0.3;
    p.theta     = 1.0;
    const auto kernel = make_renewal_kernel(std::move(p));
    std::uint64_t r   = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            couple_chains(*kernel, Past::all(1), Past::all(0), 1000, 0, RngStream(9, r++)));
    }
    state.SetItemsProcessed(state.iterations() * 1001);
}
BENCHMARK(BM_CoupleChainsRenewal);

} // namespace
