#pragma once

#include <cstdint>

namespace gchain {

/// Counter-based splittable random stream. Output i is a fixed mix of
/// (key, i), so a stream is a pure function of (rootSeed, streamId, counter):
/// replicas own disjoint streamIds and reproduce bit-identically at any
/// worker count or schedule.
class RngStream {
  public:
    RngStream() : RngStream(0, 0) {}
    RngStream(std::uint64_t root_seed, std::uint64_t stream_id);

    std::uint64_t next_u64() noexcept;

    /// Uniform on [0, 1) with 53 random bits.
    double next_double() noexcept
    {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Child stream independent of this one; deterministic in (state, tag).
    RngStream derive(std::uint64_t tag) const noexcept;

    std::uint64_t key() const noexcept { return key_; }
    std::uint64_t counter() const noexcept { return counter_; }

    // UniformRandomBitGenerator interface.
    using result_type = std::uint64_t;
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~static_cast<result_type>(0); }
    result_type operator()() noexcept { return next_u64(); }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace gchain
