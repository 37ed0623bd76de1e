#include "gchain/sim.hpp"

#include "gchain/models.hpp"
#include "gchain/oracle.hpp"
#include "gchain/parallel.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace gchain;
using gchain::testing::ising_params;
using gchain::testing::markov_params;
using gchain::testing::renewal_power_params;

namespace {

/// Stationary distribution of an order-1 chain by power iteration.
std::vector<double> markov_stationary(const FiniteMemoryParams& p)
{
    std::vector<double> pi{0.5, 0.5};
    for (int it = 0; it < 10000; ++it) {
        std::vector<double> next{0.0, 0.0};
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                next[static_cast<std::size_t>(j)] +=
                    pi[static_cast<std::size_t>(i)]
                    * p.table[static_cast<std::size_t>(i) * 2 + static_cast<std::size_t>(j)];
            }
        }
        pi = next;
    }
    return pi;
}

} // namespace

TEST_CASE("degenerate iid chain emits a constant trajectory")
{
    // An almost-deterministic kernel (entries must stay positive).
    const auto k = make_iid_kernel({1e-9, 1.0 - 1e-9});
    const auto t = sample_chain(*k, Past::all(0), 200, RngStream(3, 0));
    REQUIRE(t.symbols.size() == 201);
    for (int s : t.symbols) { CHECK(s == 1); }
    CHECK(t.model_ref == k->id_hash());
}

TEST_CASE("renewal with q_0 near 1 glues after each renewal")
{
    RenewalParams p;
    p.q_prefix  = {1.0 - 1e-12};
    p.q_inf     = 0.4;
    p.tail_kind = RenewalParams::TailKind::constant;
    const auto k = make_renewal_kernel(std::move(p));
    const auto t = sample_chain(*k, Past::all(1), 400, RngStream(4, 1));
    for (std::size_t i = 1; i < t.symbols.size(); ++i) {
        if (t.symbols[i - 1] == 1) { CHECK(t.symbols[i] == 1); }
    }
}

TEST_CASE("one-step frequencies match the kernel within 4 sigma")
{
    const auto   k = make_ar_kernel(ising_params(0.3, 0.9));
    const Past   x({1, 0, 1}, {0, 1});
    const double p1 = k->eval(1, x);
    const int    n  = 100000;
    int          ones = 0;
    RngStream    rng(5, 0);
    for (int r = 0; r < n; ++r) {
        const auto t = sample_chain(*k, x, 0, rng.derive(static_cast<std::uint64_t>(r)));
        ones += t.symbols[0];
    }
    const double sigma = std::sqrt(p1 * (1.0 - p1) * n);
    CHECK(std::abs(ones - p1 * n) < 4.0 * sigma);
}

TEST_CASE("sampling is deterministic and independent of worker count")
{
    const auto k = make_renewal_kernel(renewal_power_params());
    const Past x = Past::all(1);

    std::vector<Trajectory> a(64), b(64);
    const RngStream         root(99, 0);
    parallel_for(64, 1, [&](std::size_t r) {
        a[r] = sample_chain(*k, x, 50, root.derive(r));
    });
    parallel_for(64, 4, [&](std::size_t r) {
        b[r] = sample_chain(*k, x, 50, root.derive(r));
    });
    for (std::size_t r = 0; r < 64; ++r) { CHECK(a[r].symbols == b[r].symbols); }
}

TEST_CASE("empirical window law agrees with the oracle at small horizons")
{
    const auto k   = make_renewal_kernel(renewal_power_params());
    const Past x   = Past::all(1);
    const auto law = exact_window_law(*k, x, 0, 6);

    const int                 n = 60000;
    std::vector<std::int64_t> counts(law.probs.size(), 0);
    RngStream                 rng(6, 0);
    for (int r = 0; r < n; ++r) {
        const auto  t   = sample_chain(*k, x, 6, rng.derive(static_cast<std::uint64_t>(r)));
        std::size_t idx = 0;
        for (int s : t.symbols) { idx = idx * 2 + static_cast<std::size_t>(s); }
        ++counts[idx];
    }
    // Merged z-test: any cell with a decent expected count stays within 4.5
    // sigma (128 cells; fixed seed keeps this deterministic).
    for (std::size_t c = 0; c < law.probs.size(); ++c) {
        const double expect = law.probs[c] * n;
        if (expect < 25.0) { continue; }
        const double sigma = std::sqrt(n * law.probs[c] * (1.0 - law.probs[c]));
        CHECK(std::abs(counts[c] - expect) < 4.5 * sigma);
    }
}

TEST_CASE("stationary past sampling: iid suffix frequencies")
{
    const auto k = make_iid_kernel({0.25, 0.75});
    RngStream  rng(7, 0);
    int        ones = 0, total = 0;
    for (int r = 0; r < 4000; ++r) {
        const Past p = sample_stationary_past(*k, 16, 8, Past::all(0),
                                              rng.derive(static_cast<std::uint64_t>(r)));
        CHECK(p.suffix_length() <= 8); // canonicalization may absorb into the tail
        for (std::int64_t i = 1; i <= 8; ++i) {
            ones += p.lookup(i) == 1 ? 1 : 0;
            ++total;
        }
    }
    const double sigma = std::sqrt(0.75 * 0.25 * total);
    CHECK(std::abs(ones - 0.75 * total) < 4.0 * sigma);
}

TEST_CASE("stationary past sampling matches the power-iteration oracle")
{
    const auto params = markov_params(0.85, 0.65);
    const auto k      = make_finite_memory_kernel(params);
    const auto pi     = markov_stationary(params);

    RngStream rng(8, 0);
    const int n    = 50000;
    int       ones = 0;
    for (int r = 0; r < n; ++r) {
        const Past p = sample_stationary_past(*k, 200, 1, Past::all(0),
                                              rng.derive(static_cast<std::uint64_t>(r)));
        ones += p.lookup(1) == 1 ? 1 : 0;
    }
    const double sigma = std::sqrt(pi[1] * (1.0 - pi[1]) * n);
    CHECK(std::abs(ones - pi[1] * n) < 4.0 * sigma);
}

TEST_CASE("stationary sampler validates its burn-in")
{
    const auto k = make_iid_kernel({0.5, 0.5});
    CHECK_THROWS_AS(sample_stationary_past(*k, 4, 8, Past::all(0), RngStream(1, 0)),
                    std::invalid_argument);
    // burn_in == suffix_len equals direct sampling.
    const Past p = sample_stationary_past(*k, 8, 8, Past::all(0), RngStream(1, 0));
    CHECK(p.tail_period() == 1);
}

TEST_CASE("default burn-in scales with the model memory and reports capping")
{
    const auto fast = default_burn_in(*make_iid_kernel({0.5, 0.5}));
    CHECK(fast.steps == 10);
    CHECK(!fast.capped);
    const auto slow = default_burn_in(*make_ar_kernel(ising_params(0.3, 0.9)));
    CHECK(slow.capped);
    CHECK(slow.steps == (1 << 20));
}
