#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace pottsmc {

/// Random-cluster state: a subset of the edge indices of a graph, stored as a
/// bitset of fixed width |E|.
///
/// For exhaustive enumeration the state is identified with the integer whose
/// bit e is set iff edge e is open (see index() / from_index()).
class RCState {
 public:
  RCState() = default;
  explicit RCState(std::size_t n_edges)
      : width_(n_edges), words_((n_edges + 63) / 64, 0) {}

  static RCState full(std::size_t n_edges) {
    RCState s(n_edges);
    for (std::size_t e = 0; e < n_edges; ++e) s.set(e);
    return s;
  }

  static RCState from_index(std::uint64_t index, std::size_t n_edges) {
    if (n_edges < 64 && (index >> n_edges) != 0)
      throw std::out_of_range("RCState::from_index: index wider than edge set");
    RCState s(n_edges);
    if (!s.words_.empty()) s.words_[0] = index;
    return s;
  }

  std::size_t width() const noexcept { return width_; }

  bool test(std::size_t e) const { return (words_[e >> 6] >> (e & 63)) & 1u; }
  void set(std::size_t e, bool value = true) {
    const std::uint64_t bit = std::uint64_t{1} << (e & 63);
    if (value)
      words_[e >> 6] |= bit;
    else
      words_[e >> 6] &= ~bit;
  }
  void reset(std::size_t e) { set(e, false); }
  void clear() noexcept {
    for (auto& w : words_) w = 0;
  }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  /// True iff every open edge of *this is open in other.
  bool subset_of(const RCState& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~other.words_[i]) return false;
    return true;
  }

  /// Enumeration index; only valid for width() <= 64.
  std::uint64_t index() const {
    if (width_ > 64) throw std::out_of_range("RCState::index: more than 64 edges");
    return words_.empty() ? 0 : words_[0];
  }

  friend bool operator==(const RCState&, const RCState&) = default;

 private:
  std::size_t width_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace pottsmc
