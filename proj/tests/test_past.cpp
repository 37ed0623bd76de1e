#include "gchain/past.hpp"

#include "gchain/rng.hpp"

#include <stdexcept>

#include <doctest.h>

using namespace gchain;

TEST_CASE("lookup walks suffix then the periodic tail")
{
    const Past p({1, 0, 0}, {0, 1});
    CHECK(p.lookup(1) == 1);
    CHECK(p.lookup(2) == 0);
    CHECK(p.lookup(3) == 0);
    CHECK(p.lookup(4) == 0); // tail[0]
    CHECK(p.lookup(5) == 1); // tail[1]
    CHECK(p.lookup(6) == 0);
    CHECK(p.lookup(7) == 1);
    CHECK_THROWS_AS(p.lookup(0), std::invalid_argument);
}

TEST_CASE("tail period is minimized")
{
    const Past p({}, {1, 0, 1, 0});
    CHECK(p.tail_period() == 2);
    const Past q({}, {1, 1, 1});
    CHECK(q.tail_period() == 1);
    // Non-divisor repetition is untouched.
    const Past r({}, {1, 0, 1});
    CHECK(r.tail_period() == 3);
}

TEST_CASE("suffix symbols matching the tail are absorbed")
{
    // suffix (a) + tail (b a) repeated == tail (a b) repeated.
    const Past p({0}, {1, 0});
    CHECK(p.suffix_length() == 0);
    CHECK(p.tail_period() == 2);
    for (std::int64_t k = 1; k <= 8; ++k) {
        CHECK(p.lookup(k) == (k % 2 == 1 ? 0 : 1));
    }
}

TEST_CASE("unrolling one period is the identity after canonicalization")
{
    RngStream rng(20240811, 0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<int> suffix, tail;
        const auto       sl = rng.next_u64() % 6;
        const auto       tp = 1 + rng.next_u64() % 4;
        for (std::uint64_t i = 0; i < sl; ++i) {
            suffix.push_back(static_cast<int>(rng.next_u64() % 3));
        }
        for (std::uint64_t i = 0; i < tp; ++i) {
            tail.push_back(static_cast<int>(rng.next_u64() % 3));
        }
        const Past p(suffix, tail);
        const Past u = p.unroll_one_period();
        CHECK(p == u);
        for (std::int64_t k = 1; k <= 24; ++k) { CHECK(p.lookup(k) == u.lookup(k)); }
    }
}

TEST_CASE("with_prefix prepends most-recent-first")
{
    const Past base = Past::all(0);
    const std::vector<int> recent = {1, 0, 1};
    const Past p = base.with_prefix(recent);
    CHECK(p.lookup(1) == 1);
    CHECK(p.lookup(2) == 0);
    CHECK(p.lookup(3) == 1);
    CHECK(p.lookup(4) == 0);
}

TEST_CASE("constructor validation")
{
    CHECK_THROWS_AS(Past({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(Past({-1}, {0}), std::invalid_argument);
    CHECK_THROWS_AS(Past({0}, {-2}), std::invalid_argument);
}

TEST_CASE("equality is lookup equivalence for canonical forms")
{
    const Past a({1, 1}, {1});
    const Past b = Past::all(1);
    CHECK(a == b);
    const Past c({0, 1}, {1});
    CHECK(!(c == b));
}
