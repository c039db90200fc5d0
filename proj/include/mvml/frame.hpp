#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mvml/errors.hpp"
#include "mvml/formula.hpp"

namespace mvml {

/// Crisp Kripke frame: worlds 0..n-1 and an accessibility relation.
class Frame {
 public:
  explicit Frame(std::size_t worlds,
                 std::vector<std::pair<world, world>> const& edges = {})
      : n_(worlds), adj_(worlds * worlds, false), succ_(worlds) {
    if (worlds == 0) throw StructuralError("a frame needs at least one world");
    for (auto [u, v] : edges) add_edge(u, v);
  }

  /// Frame whose edge set is the bitmask `mask` over pairs u*n+v.
  static Frame from_mask(std::size_t worlds, std::uint64_t mask) {
    Frame f(worlds);
    for (world u = 0; u < worlds; ++u)
      for (world v = 0; v < worlds; ++v)
        if ((mask >> (u * worlds + v)) & 1U) f.add_edge(u, v);
    return f;
  }

  std::size_t size() const noexcept { return n_; }
  bool edge(world u, world v) const { return adj_[u * n_ + v]; }
  std::vector<world> const& successors(world u) const { return succ_.at(u); }

  std::vector<std::pair<world, world>> edges() const {
    std::vector<std::pair<world, world>> out;
    for (world u = 0; u < n_; ++u)
      for (world v : succ_[u]) out.emplace_back(u, v);
    return out;
  }

  std::size_t edge_count() const {
    std::size_t c = 0;
    for (auto const& s : succ_) c += s.size();
    return c;
  }

  /// Edge set as a bitmask over u*n+v; only meaningful for n*n <= 64.
  std::uint64_t mask() const {
    std::uint64_t m = 0;
    for (world u = 0; u < n_; ++u)
      for (world v : succ_[u]) m |= std::uint64_t{1} << (u * n_ + v);
    return m;
  }

  void add_edge(world u, world v) {
    if (u >= n_ || v >= n_) {
      throw StructuralError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                            ") outside a frame of " + std::to_string(n_) + " worlds");
    }
    if (adj_[u * n_ + v]) return;
    adj_[u * n_ + v] = true;
    auto& s = succ_[u];
    s.insert(std::upper_bound(s.begin(), s.end(), v), v);
  }

  friend bool operator==(Frame const& a, Frame const& b) {
    return a.n_ == b.n_ && a.adj_ == b.adj_;
  }

 private:
  std::size_t n_;
  std::vector<bool> adj_;
  std::vector<std::vector<world>> succ_;
};

}  // namespace mvml
