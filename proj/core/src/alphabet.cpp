#include "gchain/alphabet.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace gchain {

Alphabet::Alphabet(std::vector<std::string> symbols,
                   std::optional<std::vector<double>> embedding)
    : symbols_(std::move(symbols))
{
    if (symbols_.size() < 2) {
        throw std::invalid_argument("Alphabet: need at least 2 symbols");
    }
    std::unordered_set<std::string> seen(symbols_.begin(), symbols_.end());
    if (seen.size() != symbols_.size()) {
        throw std::invalid_argument("Alphabet: duplicate symbol labels");
    }
    if (embedding.has_value()) {
        embedding_ = std::move(*embedding);
        if (embedding_.size() != symbols_.size()) {
            throw std::invalid_argument("Alphabet: embedding size mismatch");
        }
        auto sorted = embedding_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw std::invalid_argument("Alphabet: embedding must be injective");
        }
    }
}

const Alphabet& Alphabet::spin()
{
    static const Alphabet a({"-1", "+1"}, std::vector<double>{-1.0, +1.0});
    return a;
}

int Alphabet::index_of(const std::string& label) const
{
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        if (symbols_[i] == label) { return static_cast<int>(i); }
    }
    throw std::invalid_argument("Alphabet: unknown symbol '" + label + "'");
}

bool Alphabet::is_spin() const noexcept
{
    return symbols_.size() == 2 && !embedding_.empty() && embedding_[0] == -1.0
           && embedding_[1] == 1.0;
}

bool Alphabet::operator==(const Alphabet& other) const noexcept
{
    return symbols_ == other.symbols_ && embedding_ == other.embedding_;
}

} // namespace gchain
