#include "gchain/past.hpp"

#include <algorithm>
#include <stdexcept>

namespace gchain {

Past::Past(std::vector<int> suffix, std::vector<int> tail)
    : suffix_(std::move(suffix)), tail_(std::move(tail))
{
    if (tail_.empty()) {
        throw std::invalid_argument("Past: tail pattern must have period >= 1");
    }
    for (int s : suffix_) {
        if (s < 0) { throw std::invalid_argument("Past: negative symbol index"); }
    }
    for (int s : tail_) {
        if (s < 0) { throw std::invalid_argument("Past: negative symbol index"); }
    }
    canonicalize();
}

Past Past::all(int symbol) { return Past({}, {symbol}); }

void Past::canonicalize()
{
    // Minimal period of the cyclic tail; for a doubly-infinite repetition the
    // minimal period divides the stated one.
    const std::size_t p = tail_.size();
    for (std::size_t d = 1; d < p; ++d) {
        if (p % d != 0) { continue; }
        bool ok = true;
        for (std::size_t i = d; i < p && ok; ++i) { ok = tail_[i] == tail_[i % d]; }
        if (ok) {
            tail_.resize(d);
            break;
        }
    }
    // Absorb suffix symbols that coincide with the tail continuation. Each
    // absorption rotates the tail right by one so lags keep their values.
    while (!suffix_.empty() && suffix_.back() == tail_.back()) {
        suffix_.pop_back();
        std::rotate(tail_.rbegin(), tail_.rbegin() + 1, tail_.rend());
    }
}

int Past::lookup(std::int64_t k) const
{
    if (k < 1) { throw std::invalid_argument("Past::lookup: lag must be >= 1"); }
    const auto L = static_cast<std::int64_t>(suffix_.size());
    if (k <= L) { return suffix_[static_cast<std::size_t>(k - 1)]; }
    const auto p = static_cast<std::int64_t>(tail_.size());
    return tail_[static_cast<std::size_t>((k - L - 1) % p)];
}

Past Past::unroll_one_period() const
{
    std::vector<int> suffix = suffix_;
    suffix.insert(suffix.end(), tail_.begin(), tail_.end());
    return Past(std::move(suffix), tail_);
}

Past Past::with_prefix(std::span<const int> recent) const
{
    std::vector<int> suffix(recent.begin(), recent.end());
    suffix.insert(suffix.end(), suffix_.begin(), suffix_.end());
    return Past(std::move(suffix), tail_);
}

int Past::max_symbol() const noexcept
{
    int m = 0;
    for (int s : suffix_) { m = std::max(m, s); }
    for (int s : tail_) { m = std::max(m, s); }
    return m;
}

std::string Past::to_string() const
{
    std::string out = "[";
    for (std::size_t i = 0; i < suffix_.size(); ++i) {
        out += std::to_string(suffix_[i]);
        out += ' ';
    }
    out += "| ";
    for (std::size_t i = 0; i < tail_.size(); ++i) {
        out += std::to_string(tail_[i]);
        if (i + 1 < tail_.size()) { out += ' '; }
    }
    out += "]*";
    return out;
}

} // namespace gchain
