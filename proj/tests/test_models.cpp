#include "gchain/models.hpp"

#include "gchain/models_io.hpp"
#include "gchain/numeric.hpp"
#include "gchain/rng.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace gchain;
using gchain::testing::ising_params;
using gchain::testing::logit;
using gchain::testing::random_past;
using gchain::testing::renewal_power_params;

namespace {

std::vector<std::shared_ptr<const Kernel>> sample_kernels()
{
    std::vector<std::shared_ptr<const Kernel>> out;
    out.push_back(make_iid_kernel({0.35, 0.65}));
    out.push_back(make_finite_memory_kernel(gchain::testing::markov_params(0.8, 0.7)));
    out.push_back(make_renewal_kernel(renewal_power_params()));
    out.push_back(make_ar_kernel(ising_params(0.3, 0.9)));
    {
        ArParams p;
        p.phi  = PhiSpec::logit();
        p.beta = BetaSequence({0.5, 0.25}, std::nullopt);
        out.push_back(make_ar_kernel(std::move(p)));
    }
    {
        BkfParams p;
        p.m      = {1, 3};
        p.lambda = {0.5, 0.5};
        p.psi    = PsiSpec::linear(0.25);
        out.push_back(make_bkf_kernel(std::move(p)));
    }
    {
        BkfParams p;
        p.m      = {1, 3, 5};
        p.lambda = {0.5, 0.3, 0.2};
        p.psi    = PsiSpec::step(0.1);
        p.r0     = 0.1;
        out.push_back(make_bkf_kernel(std::move(p)));
    }
    return out;
}

} // namespace

TEST_CASE("bkf evaluation matches hand values")
{
    BkfParams step;
    step.m      = {1, 3};
    step.lambda = {0.5, 0.5};
    step.psi    = PsiSpec::step(0.1);
    const auto k = make_bkf_kernel(std::move(step));

    const Past all_plus = Past::all(1);
    CHECK(k->eval(1, all_plus) == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(k->eval(0, all_plus) == doctest::Approx(0.1).epsilon(1e-15));

    BkfParams lin;
    lin.m      = {1, 3};
    lin.lambda = {0.5, 0.5};
    lin.psi    = PsiSpec::linear(0.25);
    const auto k2 = make_bkf_kernel(std::move(lin));
    // suffix (+1, -1, -1), then all -1: psi(1)/2 + psi(-1/3)/2 = 7/12.
    const Past p({1, 0, 0}, {0});
    CHECK(k2->eval(1, p) == doctest::Approx(7.0 / 12.0).epsilon(1e-15));
    CHECK(k2->eval(0, p) == doctest::Approx(5.0 / 12.0).epsilon(1e-15));
}

TEST_CASE("ar evaluation matches hand values")
{
    ArParams flat;
    flat.phi  = PhiSpec::logit();
    flat.beta = BetaSequence({}, std::nullopt);
    const auto k0 = make_ar_kernel(std::move(flat));
    RngStream  rng(11, 0);
    for (int i = 0; i < 10; ++i) {
        const Past p = random_past(rng, 2);
        CHECK(k0->eval(0, p) == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(k0->eval(1, p) == doctest::Approx(0.5).epsilon(1e-15));
    }

    ArParams one;
    one.phi  = PhiSpec::logit();
    one.beta = BetaSequence({0.5}, std::nullopt);
    const auto k1 = make_ar_kernel(std::move(one));
    const Past plus = Past::all(1);
    CHECK(k1->eval(1, plus) == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))).epsilon(1e-15));
    CHECK(k1->eval(1, plus) == doctest::Approx(0.7310585786300049).epsilon(1e-15));

    // Attractiveness at the extremes.
    const auto ising = make_ar_kernel(ising_params(0.3, 0.9));
    CHECK(ising->eval(1, Past::all(1)) > ising->eval(1, Past::all(0)));
}

TEST_CASE("renewal evaluation follows the distance-to-renewal convention")
{
    const auto k = make_renewal_kernel(renewal_power_params());
    const RenewalParams& q = *renewal_params(*k);

    CHECK(k->eval(1, Past::all(1)) == doctest::Approx(q.q(0)).epsilon(1e-15));
    // suffix (-1, -1, +1): two misses then a renewal -> q_2.
    const Past p({0, 0, 1}, {0});
    CHECK(k->eval(1, p) == doctest::Approx(q.q(2)).epsilon(1e-15));
    CHECK(k->eval(1, Past::all(0)) == doctest::Approx(q.q_inf).epsilon(1e-15));
    CHECK(k->eval(0, p) == doctest::Approx(1.0 - q.q(2)).epsilon(1e-15));
}

TEST_CASE("normalization and non-nullness over random pasts")
{
    RngStream rng(77, 0);
    for (const auto& k : sample_kernels()) {
        const int           B = k->alphabet().size();
        std::vector<double> probs(static_cast<std::size_t>(B));
        for (int trial = 0; trial < 100; ++trial) {
            const Past p = random_past(rng, B);
            k->eval_all(p, probs);
            CompensatedSum sum;
            for (double v : probs) {
                sum.add(v);
                CHECK(v >= k->non_null_bound() - 1e-12);
            }
            CHECK(std::abs(sum.value() - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("past canonicalization makes unrolled evaluation bit-identical")
{
    RngStream rng(78, 0);
    for (const auto& k : sample_kernels()) {
        const int B = k->alphabet().size();
        for (int trial = 0; trial < 40; ++trial) {
            const Past p = random_past(rng, B);
            const Past u = p.unroll_one_period();
            for (int a = 0; a < B; ++a) { CHECK(k->eval(a, p) == k->eval(a, u)); }
        }
    }
}

TEST_CASE("steppers agree with direct evaluation")
{
    RngStream rng(79, 0);
    for (const auto& k : sample_kernels()) {
        const int           B = k->alphabet().size();
        std::vector<double> from_stepper(static_cast<std::size_t>(B));
        std::vector<double> direct(static_cast<std::size_t>(B));
        for (int trial = 0; trial < 20; ++trial) {
            const Past base    = random_past(rng, B);
            auto       stepper = k->stepper(base, 40);
            std::vector<int> generated;
            for (int t = 0; t < 30; ++t) {
                stepper->dist(from_stepper);
                std::vector<int> recent(generated.rbegin(), generated.rend());
                k->eval_all(base.with_prefix(recent), direct);
                for (int a = 0; a < B; ++a) {
                    CHECK(from_stepper[static_cast<std::size_t>(a)]
                          == doctest::Approx(direct[static_cast<std::size_t>(a)])
                                 .epsilon(1e-12));
                }
                const int s = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(B));
                stepper->push(s);
                generated.push_back(s);
            }
            // pop() walks back to the root consistently.
            for (int t = 0; t < 30; ++t) { stepper->pop(); }
            stepper->dist(from_stepper);
            k->eval_all(base, direct);
            for (int a = 0; a < B; ++a) {
                CHECK(from_stepper[static_cast<std::size_t>(a)]
                      == doctest::Approx(direct[static_cast<std::size_t>(a)]).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("attractive AR is monotone under single upward flips")
{
    const auto k = make_ar_kernel(ising_params(0.3, 0.9, 0.1));
    RngStream  rng(80, 0);
    for (int trial = 0; trial < 50; ++trial) {
        Past p = random_past(rng, 2, 8, 3);
        // Flip one suffix coordinate up.
        std::vector<int> suffix(p.suffix().begin(), p.suffix().end());
        if (suffix.empty()) { continue; }
        const auto pos = rng.next_u64() % suffix.size();
        if (suffix[pos] == 1) { continue; }
        std::vector<int> flipped = suffix;
        flipped[pos]             = 1;
        const Past hi(flipped, std::vector<int>(p.tail().begin(), p.tail().end()));
        CHECK(k->eval(1, hi) >= k->eval(1, p) - 1e-15);
    }
}

TEST_CASE("family evaluation agrees with its frozen finite-memory table")
{
    // Freeze the renewal kernel beyond order 6 on the all -1 past and compare
    // with the family evaluation; the gap is bounded by var_6 = q_6 - q_inf.
    const auto k     = make_renewal_kernel(renewal_power_params());
    const int  order = 6;
    FiniteMemoryParams table;
    table.order = order;
    table.table.resize(std::size_t{1} << (order + 1));
    for (std::size_t ctx = 0; ctx < (std::size_t{1} << order); ++ctx) {
        std::vector<int> suffix;
        for (int i = order - 1; i >= 0; --i) {
            suffix.push_back(static_cast<int>((ctx >> i) & 1u));
        }
        const Past frozen(suffix, {0});
        table.table[ctx * 2]     = k->eval(0, frozen);
        table.table[ctx * 2 + 1] = k->eval(1, frozen);
    }
    const auto fm = make_finite_memory_kernel(std::move(table));

    const double bound = *k->closed_form_variation(order);
    RngStream    rng(81, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const Past p = random_past(rng, 2, 10, 4);
        for (int a = 0; a < 2; ++a) {
            CHECK(std::abs(k->eval(a, p) - fm->eval(a, p)) <= bound + 1e-15);
        }
    }
}

TEST_CASE("bkf is insensitive to the past beyond its largest block")
{
    BkfParams p;
    p.m      = {1, 3, 7};
    p.lambda = {0.2, 0.3, 0.5};
    p.psi    = PsiSpec::linear(0.2);
    const auto k = make_bkf_kernel(std::move(p));
    CHECK(*k->closed_form_variation(7) == 0.0);
    RngStream rng(82, 0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<int> shared;
        for (int i = 0; i < 7; ++i) {
            shared.push_back(static_cast<int>(rng.next_u64() & 1u));
        }
        const Past a = random_past(rng, 2).with_prefix(shared);
        const Past b = random_past(rng, 2).with_prefix(shared);
        CHECK(k->eval(1, a) == doctest::Approx(k->eval(1, b)).epsilon(1e-15));
    }
}

TEST_CASE("parameter validation rejects malformed families")
{
    BkfParams bad;
    bad.m      = {2, 4};
    bad.lambda = {0.5, 0.5};
    bad.psi    = PsiSpec::step(0.1);
    CHECK_THROWS_AS(make_bkf_kernel(std::move(bad)), std::invalid_argument);

    BkfParams bad2;
    bad2.m      = {1, 3};
    bad2.lambda = {0.5, 0.6};
    bad2.psi    = PsiSpec::step(0.1);
    CHECK_THROWS_AS(make_bkf_kernel(std::move(bad2)), std::invalid_argument);

    CHECK_THROWS_AS(BetaSequence({}, PowerLawTail{1.0, 0.9, 1}), std::invalid_argument);

    RenewalParams bad3 = renewal_power_params();
    bad3.q_inf         = 0.0;
    CHECK_THROWS_AS(make_renewal_kernel(std::move(bad3)), std::invalid_argument);

    RenewalParams bad4;
    bad4.q_prefix = {0.6, 0.7}; // increasing
    CHECK_THROWS_AS(make_renewal_kernel(std::move(bad4)), std::invalid_argument);

    FiniteMemoryParams bad5;
    bad5.order = 0;
    bad5.table = {0.5, 0.6};
    CHECK_THROWS_AS(make_finite_memory_kernel(std::move(bad5)), std::invalid_argument);
}

TEST_CASE("schema round-trips are bit-exact")
{
    RngStream rng(83, 0);
    for (const auto& k : sample_kernels()) {
        const std::string text = k->schema_json();
        const auto        back = kernel_from_json_text(text);
        CHECK(back->schema_json() == text);
        CHECK(back->id_hash() == k->id_hash());
        // Shared evaluation spot-check.
        const Past p = random_past(rng, k->alphabet().size());
        for (int a = 0; a < k->alphabet().size(); ++a) {
            CHECK(back->eval(a, p) == k->eval(a, p));
        }
    }

    // Arbitrary doubles survive the decimal round trip.
    for (int i = 0; i < 200; ++i) {
        const double x = std::ldexp(static_cast<double>(rng.next_u64() >> 11), -53) * 3.7e3
                         - 1.1e3;
        nlohmann::json j = x;
        CHECK(nlohmann::json::parse(j.dump()).get<double>() == x);
    }
}

TEST_CASE("bkf bound series dichotomy")
{
    // m_j = 5^j; slow weights diverge, fast weights converge.
    const int J = 24;
    std::vector<std::int64_t> m(J);
    std::int64_t              mj = 1;
    for (int i = 0; i < J; ++i) {
        mj *= 5;
        m[static_cast<std::size_t>(i)] = mj;
    }
    const auto make = [&](double ratio) {
        BkfParams p;
        p.m = m;
        std::vector<double> lambda(J);
        CompensatedSum      norm;
        double              w = 1.0;
        for (int i = 0; i < J; ++i) {
            w *= ratio;
            lambda[static_cast<std::size_t>(i)] = w;
            norm.add(w);
        }
        for (auto& l : lambda) { l /= norm.value(); }
        p.lambda = lambda;
        p.psi    = PsiSpec::step(0.1);
        p.r0     = 0.1;
        return p;
    };

    const auto slow = bkf_l2_bound_series(make(0.5), 24);
    CHECK(slow.lower.verdict == Verdict::divergent);
    CHECK(slow.lower.certified);
    const auto fast = bkf_l2_bound_series(make(0.2), 24);
    CHECK(fast.upper.verdict == Verdict::convergent);
    CHECK(fast.upper.certified);

    // Single block: the raw upper series is m_1 at n = 1, nothing after.
    BkfParams single;
    single.m      = {3};
    single.lambda = {1.0};
    single.psi    = PsiSpec::step(0.1);
    single.r0     = 0.1;
    const auto s  = bkf_l2_bound_series(single, 8);
    REQUIRE(!s.upper.partial_sums.empty());
    CHECK(s.upper.partial_sums.back() / s.upper_prefactor == doctest::Approx(3.0));
    CHECK(s.lower.partial_sums.empty());

    // The lower series demands lacunarity.
    BkfParams dense = make(0.5);
    dense.m         = {1, 3, 5};
    dense.lambda    = {0.4, 0.3, 0.3};
    CHECK_THROWS_AS(bkf_l2_bound_series(dense, 8), std::invalid_argument);
}

TEST_CASE("ar bound series certification")
{
    const auto conv = ar_l2_bound_series(ising_params(0.8, 0.9), 512);
    CHECK(conv.upper.verdict == Verdict::convergent);
    CHECK(conv.upper.certified);
    CHECK(conv.lower.verdict == Verdict::convergent);

    const auto div = ar_l2_bound_series(ising_params(0.3, 0.9), 512);
    CHECK(div.lower.verdict == Verdict::divergent);
    CHECK(div.lower.certified);
    CHECK(div.upper.verdict == Verdict::divergent);

    ArParams finite;
    finite.phi  = PhiSpec::logit();
    finite.beta = BetaSequence({0.4, 0.2, 0.1}, std::nullopt);
    const auto fin = ar_l2_bound_series(finite, 16);
    CHECK(fin.upper.verdict == Verdict::convergent);
    CHECK(fin.upper.certified);
}

TEST_CASE("memory scale and burn-in hooks")
{
    const auto renewal = make_renewal_kernel(renewal_power_params());
    // q_i - q_inf = 0.3/(i+1) <= 1e-6 at i ~ 3e5.
    CHECK(renewal->memory_scale() == doctest::Approx(300000.0).epsilon(0.01));

    const auto ising = make_ar_kernel(ising_params(0.3, 0.9));
    CHECK(ising->memory_scale() == 1000000.0); // capped

    BkfParams p;
    p.m      = {1, 9};
    p.lambda = {0.5, 0.5};
    p.psi    = PsiSpec::linear(0.2);
    CHECK(make_bkf_kernel(std::move(p))->memory_scale() == 9.0);
}
