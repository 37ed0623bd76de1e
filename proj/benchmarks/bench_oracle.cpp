#include "gchain/numeric.hpp"
#include "gchain/models.hpp"
#include "gchain/oracle.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace gchain;

void BM_WindowLawRenewal(benchmark::State& state)
{
    RenewalParams p;
    p.q_inf     = 0.5;
    p.tail_kind = RenewalParams::TailKind::power;
    p.a         = 0.3;
    p.theta     = 1.0;
    const auto kernel = make_renewal_kernel(std::move(p));
    const auto t1     = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(exact_window_law(*kernel, Past::all(1), 0, t1));
    }
    state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << (t1 + 1)));
}
BENCHMARK(BM_WindowLawRenewal)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_WeakL2ExactAr(benchmark::State& state)
{
    ArParams p;
    p.phi  = PhiSpec::logit();
    p.beta = BetaSequence({}, PowerLawTail{0.9 / hurwitz_zeta(1.3, 1.0), 1.3, 1});
    const auto kernel = make_ar_kernel(std::move(p));
    const auto n      = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            exact_weak_l2_expectation(*kernel, Past::all(1), Past::all(0), n));
    }
}
BENCHMARK(BM_WeakL2ExactAr)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

} // namespace
