#include "gchain/rng.hpp"

namespace gchain {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

// SplitMix64 finalizer (Steele/Lea/Flood; Vigna's fixed-increment variant).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace

RngStream::RngStream(std::uint64_t root_seed, std::uint64_t stream_id)
{
    // Two dependent finalizer rounds decorrelate adjacent (seed, id) pairs.
    const std::uint64_t a = mix64(root_seed + kGolden);
    const std::uint64_t b = mix64(a + stream_id + kGolden);
    key_ = mix64(a ^ (b + kGolden));
}

std::uint64_t RngStream::next_u64() noexcept
{
    const std::uint64_t z = mix64(key_ + (++counter_) * kGolden);
    return z;
}

RngStream RngStream::derive(std::uint64_t tag) const noexcept
{
    RngStream child;
    child.key_     = mix64(key_ ^ mix64(tag + kGolden));
    child.counter_ = 0;
    return child;
}

} // namespace gchain
