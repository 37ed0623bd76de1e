#pragma once

#include <optional>
#include <string>
#include <vector>

namespace gchain {

/// Finite ordered symbol set. Canonical index = position in `symbols`.
/// An optional injective numeric embedding supports spin-valued statistics
/// (correlations, window means).
class Alphabet {
  public:
    Alphabet(std::vector<std::string> symbols,
             std::optional<std::vector<double>> embedding = std::nullopt);

    /// {-1, +1} with embedding (-1.0, +1.0); index 0 is "-1".
    static const Alphabet& spin();

    int size() const noexcept { return static_cast<int>(symbols_.size()); }
    const std::string& label(int idx) const { return symbols_.at(static_cast<std::size_t>(idx)); }
    int index_of(const std::string& label) const; // throws if unknown

    bool has_embedding() const noexcept { return !embedding_.empty(); }
    double embed(int idx) const { return embedding_.at(static_cast<std::size_t>(idx)); }

    bool is_spin() const noexcept;

    bool operator==(const Alphabet& other) const noexcept;

  private:
    std::vector<std::string> symbols_;
    std::vector<double>      embedding_;
};

} // namespace gchain
