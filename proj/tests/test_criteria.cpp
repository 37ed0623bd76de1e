#include "gchain/criteria.hpp"

#include "gchain/models.hpp"
#include "gchain/numeric.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace gchain;
using gchain::testing::ising_params;
using gchain::testing::logit;
using gchain::testing::renewal_power_params;

namespace {

/// Brute-force variation oracle for kernels supported on the first `span`
/// lags: enumerate the shared prefix and both completions exactly.
double brute_force_variation(const Kernel& k, std::int64_t kk, std::int64_t span)
{
    const std::int64_t extra = std::max<std::int64_t>(0, span - kk);
    double             best  = 0.0;
    const Past         anchor = Past::all(0);
    for (std::uint64_t pi = 0; pi < (std::uint64_t{1} << kk); ++pi) {
        std::vector<int> prefix;
        for (std::int64_t b = kk - 1; b >= 0; --b) {
            prefix.push_back(static_cast<int>((pi >> b) & 1u));
        }
        for (std::uint64_t ci = 0; ci < (std::uint64_t{1} << extra); ++ci) {
            auto cx = prefix;
            for (std::int64_t b = extra - 1; b >= 0; --b) {
                cx.push_back(static_cast<int>((ci >> b) & 1u));
            }
            const Past x = anchor.with_prefix(cx);
            for (std::uint64_t cj = 0; cj < (std::uint64_t{1} << extra); ++cj) {
                auto cy = prefix;
                for (std::int64_t b = extra - 1; b >= 0; --b) {
                    cy.push_back(static_cast<int>((cj >> b) & 1u));
                }
                const Past y = anchor.with_prefix(cy);
                for (int a = 0; a < 2; ++a) {
                    best = std::max(best, std::abs(k.eval(a, x) - k.eval(a, y)));
                }
            }
        }
    }
    return best;
}

/// Brute-force oscillation oracle over full contexts of length `span`: the
/// flip position is lag kk, everything else enumerated.
double brute_force_oscillation(const Kernel& k, std::int64_t kk, std::int64_t span)
{
    double     sup_per_a[2] = {0.0, 0.0};
    const Past anchor       = Past::all(0);
    const std::int64_t rest = span - 1;
    for (std::uint64_t ci = 0; ci < (std::uint64_t{1} << rest); ++ci) {
        std::vector<int> ctx_bits;
        for (std::int64_t b = rest - 1; b >= 0; --b) {
            ctx_bits.push_back(static_cast<int>((ci >> b) & 1u));
        }
        // Insert the flip at lag kk (position kk-1 in most-recent-first order).
        for (int a = 0; a < 2; ++a) {
            auto with = [&](int flip) {
                auto v = ctx_bits;
                v.insert(v.begin() + static_cast<std::ptrdiff_t>(kk - 1), flip);
                return k.eval(a, anchor.with_prefix(v));
            };
            sup_per_a[a] = std::max(sup_per_a[a], std::abs(with(1) - with(0)));
        }
    }
    return sup_per_a[0] + sup_per_a[1];
}

} // namespace

TEST_CASE("renewal variation rate is the exact closed form")
{
    const auto k = make_renewal_kernel(renewal_power_params());
    SearchBudget budget;
    for (std::int64_t kk = 0; kk <= 50; ++kk) {
        const SearchResult r = variation_rate(*k, kk, budget);
        CHECK(r.exact);
        CHECK(std::abs(r.value - 0.3 / static_cast<double>(kk + 1)) <= 1e-12);
    }
    // k = 2 from the worked example: 0.3 / 3.
    CHECK(variation_rate(*k, 2, budget).value == doctest::Approx(0.1).epsilon(1e-13));
}

TEST_CASE("iid kernels have zero variation and oscillation")
{
    const auto   k = make_iid_kernel({0.3, 0.7});
    SearchBudget budget;
    for (std::int64_t kk : {1, 2, 5}) {
        const SearchResult v = variation_rate(*k, kk, budget);
        CHECK(v.value == 0.0);
        CHECK(v.exact);
        const SearchResult o = oscillation(*k, kk, budget);
        CHECK(o.value == 0.0);
        CHECK(o.exact);
    }
}

TEST_CASE("attractive AR variation matches exhaustive enumeration")
{
    ArParams p;
    p.phi  = PhiSpec::logit();
    p.beta = BetaSequence({0.5, 0.25}, std::nullopt);
    const auto k = make_ar_kernel(std::move(p));

    SearchBudget budget;
    const SearchResult r = variation_rate(*k, 1, budget);
    CHECK(r.exact);
    // Independent enumeration over every lag the kernel can see.
    CHECK(r.value == doctest::Approx(brute_force_variation(*k, 1, 2)).epsilon(1e-14));
    // Hand value: extremal tails with the exhaustive one-symbol prefix.
    CHECK(r.value == doctest::Approx(logit(0.75) - logit(0.25)).epsilon(1e-14));

    const SearchResult r2 = variation_rate(*k, 0, budget);
    CHECK(r2.value == doctest::Approx(brute_force_variation(*k, 0, 2)).epsilon(1e-14));
}

TEST_CASE("bkf linear-psi oscillation closed form against flip enumeration")
{
    BkfParams p;
    p.m      = {1, 3};
    p.lambda = {0.5, 0.5};
    p.psi    = PsiSpec::linear(0.3);
    const auto k = make_bkf_kernel(std::move(p));

    SearchBudget budget;
    const SearchResult o = oscillation(*k, 2, budget);
    CHECK(o.exact);
    CHECK(o.value == doctest::Approx(2.0 * 0.4 * (0.5 / 3.0)).epsilon(1e-13)); // 0.13333
    CHECK(o.value == doctest::Approx(brute_force_oscillation(*k, 2, 3)).epsilon(1e-13));

    const SearchResult o1 = oscillation(*k, 1, budget);
    CHECK(o1.value == doctest::Approx(brute_force_oscillation(*k, 1, 3)).epsilon(1e-13));
    CHECK_THROWS_AS(oscillation(*k, 0, budget), std::invalid_argument);
}

TEST_CASE("renewal oscillation closed form and bound")
{
    const auto    k = make_renewal_kernel(renewal_power_params());
    const auto&   q = *renewal_params(*k);
    SearchBudget  budget;
    for (std::int64_t kk : {1, 2, 5}) {
        const SearchResult o = oscillation(*k, kk, budget);
        CHECK(o.exact);
        CHECK(o.value == doctest::Approx(2.0 * (q.q(kk - 1) - q.q_inf)).epsilon(1e-13));
        CHECK(o.value <= 2.0 * (q.q(0) - q.q_inf) + 1e-15);
    }
}

TEST_CASE("finite-memory searches are exact under full enumeration")
{
    const auto k = make_finite_memory_kernel(gchain::testing::markov_params(0.8, 0.6));
    SearchBudget budget;

    const SearchResult v0 = variation_rate(*k, 0, budget);
    CHECK(v0.exact);
    CHECK(v0.value == doctest::Approx(brute_force_variation(*k, 0, 1)).epsilon(1e-14));
    CHECK(v0.value == doctest::Approx(0.4).epsilon(1e-14)); // rows (0.8,0.2) vs (0.4,0.6)

    const SearchResult v1 = variation_rate(*k, 1, budget);
    CHECK(v1.value == 0.0);
    CHECK(v1.exact);

    const SearchResult o1 = oscillation(*k, 1, budget);
    CHECK(o1.exact);
    CHECK(o1.value == doctest::Approx(brute_force_oscillation(*k, 1, 1)).epsilon(1e-14));
    CHECK(oscillation(*k, 2, budget).value == 0.0);
}

TEST_CASE("dobrushin report for the worked families")
{
    SearchBudget budget;

    // i.i.d.: zero sums, satisfied.
    const auto iid = make_iid_kernel({0.5, 0.5});
    const auto r0  = dobrushin_sum(*iid, 16, budget);
    CHECK(r0.oscillation_series.partial_sums.back() == 0.0);
    CHECK(r0.status == DobrushinReport::Status::satisfied);

    // Linear-psi mixture: exact oscillation total 2(1-2 eps) = 0.8.
    BkfParams lin;
    lin.m      = {1, 3, 5};
    lin.lambda = {0.5, 0.3, 0.2};
    lin.psi    = PsiSpec::linear(0.3);
    const auto bkf = make_bkf_kernel(std::move(lin));
    const auto r1  = dobrushin_sum(*bkf, 16, budget);
    CHECK(r1.oscillation_series.partial_sums.back() == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(r1.status == DobrushinReport::Status::satisfied);
    CHECK(*r1.coefficient_total_upper == doctest::Approx(0.4).epsilon(1e-12));

    // Ising with total coupling 0.9: coefficient sum certified below 1.
    const auto ising = make_ar_kernel(ising_params(0.3, 0.9));
    const auto r2    = dobrushin_sum(*ising, 20000, budget);
    CHECK(r2.status == DobrushinReport::Status::satisfied);
    REQUIRE(r2.coefficient_total_upper.has_value());
    CHECK(*r2.coefficient_total_upper < 1.0);
    CHECK(*r2.coefficient_total_upper > 0.8);
    // The printed sum-over-symbols series is twice that and lands above 1.
    REQUIRE(r2.oscillation_total_upper.has_value());
    CHECK(*r2.oscillation_total_upper > 1.0);
}

TEST_CASE("ell2 criterion certified dichotomy")
{
    SearchBudget budget;
    budget.exhaustive_limit = 1 << 10;

    const auto conv = ell2_criterion(*make_ar_kernel(ising_params(0.8, 0.9)), 256, budget);
    CHECK(conv.series.verdict == Verdict::convergent);
    CHECK(conv.series.certified);

    const auto div = ell2_criterion(*make_ar_kernel(ising_params(0.3, 0.9)), 256, budget);
    CHECK(div.series.verdict == Verdict::divergent);
    CHECK(div.series.certified);

    const auto zero = ell2_criterion(*make_iid_kernel({0.4, 0.6}), 64, budget);
    CHECK(zero.series.verdict == Verdict::convergent);
    CHECK(zero.series.partial_sums.back() == 0.0);

    // Renewal with theta = 1: var_k^2 = (0.3/(k+1))^2 is summable, certified.
    const auto ren = ell2_criterion(*make_renewal_kernel(renewal_power_params()), 128, budget);
    CHECK(ren.series.verdict == Verdict::convergent);
    CHECK(ren.series.certified);
    for (std::size_t i = 1; i < ren.var_values.size(); ++i) {
        CHECK(ren.var_values[i] <= ren.var_values[i - 1] + 1e-15); // monotone windows
        CHECK(ren.var_exact[i]);
    }
}

TEST_CASE("exhaustive AR variation respects the bi-Lipschitz sandwich")
{
    const ArParams params = ising_params(0.5, 0.8);
    const auto     k      = make_ar_kernel(params);
    const double   gamma  = params.bi_lipschitz_gamma();
    SearchBudget   budget;
    for (std::int64_t kk = 1; kk <= 10; ++kk) {
        const SearchResult r = variation_rate(*k, kk, budget);
        REQUIRE(r.exact);
        const double tail = params.beta.tail_sum(kk);
        CHECK(r.value >= tail / gamma - 1e-12);
        CHECK(r.value <= gamma * tail + 1e-12);
    }
}

TEST_CASE("budget misuse is rejected")
{
    const auto   k = make_iid_kernel({0.5, 0.5});
    SearchBudget zero;
    zero.exhaustive_limit = 0;
    zero.random_prefixes  = 0;
    CHECK_THROWS_AS(variation_rate(*k, 1, zero), std::invalid_argument);
    CHECK_THROWS_AS(variation_rate(*k, -1, SearchBudget{}), std::invalid_argument);
    CHECK_THROWS_AS(dobrushin_sum(*k, 0, SearchBudget{}), std::invalid_argument);
    CHECK_THROWS_AS(ell2_criterion(*k, 0, SearchBudget{}), std::invalid_argument);
}
