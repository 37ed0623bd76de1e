#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gchain {

/// Semi-infinite history x_{-1}, x_{-2}, ... stored as an explicit suffix
/// (most recent first) plus an eventually-periodic tail pattern.
///
/// The representation is canonicalized on construction: the tail pattern is
/// reduced to its minimal period and suffix symbols that merely repeat the
/// tail are absorbed into it. Two pasts that agree at every lag therefore
/// compare equal and produce bit-identical kernel evaluations.
class Past {
  public:
    /// Constant all-zeros past (placeholder; same as Past::all(0)).
    Past() : suffix_(), tail_{0} {}

    /// `suffix[0]` is x_{-1}; `tail[0]` is the symbol at lag suffix.size()+1.
    Past(std::vector<int> suffix, std::vector<int> tail);

    /// Constant past (period-1 tail, empty suffix).
    static Past all(int symbol);

    /// Symbol index at lag k >= 1 (k = 1 is the most recent symbol).
    int lookup(std::int64_t k) const;

    std::int64_t suffix_length() const noexcept { return static_cast<std::int64_t>(suffix_.size()); }
    std::int64_t tail_period() const noexcept { return static_cast<std::int64_t>(tail_.size()); }
    std::span<const int> suffix() const noexcept { return suffix_; }
    std::span<const int> tail() const noexcept { return tail_; }

    /// Equivalent past with one tail period unrolled into the suffix.
    /// Canonicalization maps it back onto *this.
    Past unroll_one_period() const;

    /// New past with `recent` prepended (recent[0] becomes the new x_{-1}).
    Past with_prefix(std::span<const int> recent) const;

    int max_symbol() const noexcept;

    bool operator==(const Past& other) const noexcept
    {
        return suffix_ == other.suffix_ && tail_ == other.tail_;
    }

    std::string to_string() const;

  private:
    std::vector<int> suffix_;
    std::vector<int> tail_;

    void canonicalize();
};

} // namespace gchain
