#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "mvml/semantics.hpp"
#include "mvml/translation.hpp"

namespace mvml {

/// Every frame with 1..n worlds: by world count, then by edge mask.
struct FrameUniverse {
  std::size_t max_worlds = 0;
  bool iso_reduced = false;
  std::vector<Frame> frames;
};

/// Edge mask of the isomorphic copy with the least mask.
inline std::uint64_t canonical_mask(Frame const& F) {
  std::size_t n = F.size();
  if (n > 8) throw ParameterError("canonical forms are limited to 8 worlds");
  std::vector<world> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  auto edges = F.edges();
  std::uint64_t best = ~std::uint64_t{0};
  do {
    std::uint64_t m = 0;
    for (auto [u, v] : edges) m |= std::uint64_t{1} << (perm[u] * n + perm[v]);
    best = std::min(best, m);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

/// World count and canonical mask: equal iff the frames are isomorphic.
inline std::pair<std::size_t, std::uint64_t> canonical_form(Frame const& F) {
  return {F.size(), canonical_mask(F)};
}

inline bool isomorphic(Frame const& a, Frame const& b) {
  return a.size() == b.size() && a.edge_count() == b.edge_count() &&
         canonical_form(a) == canonical_form(b);
}

/// All frames up to n worlds; with `iso_reduce`, one per isomorphism class
/// (the one whose mask is canonical).
inline FrameUniverse enumerate_frames(std::size_t n, bool iso_reduce = false,
                                      std::uint64_t max_frames = 100'000) {
  if (n == 0) throw ParameterError("a frame universe needs at least one world");
  std::uint64_t total = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    if (k * k >= 63 || (total += std::uint64_t{1} << (k * k)) > max_frames) {
      throw ResourceError("universe of frames with up to " + std::to_string(n) +
                          " worlds exceeds the budget of " + std::to_string(max_frames));
    }
  }
  FrameUniverse U{n, iso_reduce, {}};
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << (k * k)); ++m) {
      Frame F = Frame::from_mask(k, m);
      if (iso_reduce && canonical_mask(F) != m) continue;
      U.frames.push_back(std::move(F));
    }
  }
  return U;
}

/// The subframe generated by w, worlds renumbered in increasing order.
inline Frame generated_subframe(Frame const& F, world w) {
  if (w >= F.size()) throw DomainError("world " + std::to_string(w) + " out of range");
  std::vector<bool> seen(F.size(), false);
  std::vector<world> stack{w};
  seen[w] = true;
  while (!stack.empty()) {
    world u = stack.back();
    stack.pop_back();
    for (world v : F.successors(u)) {
      if (!seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
  }
  std::vector<world> rename(F.size(), 0);
  std::size_t k = 0;
  for (world u = 0; u < F.size(); ++u) {
    if (seen[u]) rename[u] = static_cast<world>(k++);
  }
  Frame G(k);
  for (auto [u, v] : F.edges()) {
    if (seen[u] && seen[v]) G.add_edge(rename[u], rename[v]);
  }
  return G;
}

/// Disjoint union; part i's worlds follow those of parts 0..i-1.
inline Frame disjoint_union(std::span<Frame const> parts) {
  if (parts.empty()) throw ParameterError("disjoint union of no frames");
  std::size_t total = 0;
  for (auto const& F : parts) total += F.size();
  Frame U(total);
  std::size_t off = 0;
  for (auto const& F : parts) {
    for (auto [u, v] : F.edges()) {
      U.add_edge(static_cast<world>(u + off), static_cast<world>(v + off));
    }
    off += F.size();
  }
  return U;
}

struct FrameMap {
  Frame source;
  Frame target;
  std::vector<world> map;
};

/// Forth: Rwv ⇒ R'f(w)f(v). Back: R'f(w)u ⇒ ∃v (Rwv ∧ f(v) = u).
inline bool is_bounded_morphism(FrameMap const& m) {
  if (m.map.size() != m.source.size()) throw DomainError("map is not total on the source");
  for (world x : m.map) {
    if (x >= m.target.size()) throw DomainError("map leaves the target frame");
  }
  for (auto [u, v] : m.source.edges()) {
    if (!m.target.edge(m.map[u], m.map[v])) return false;
  }
  for (world w = 0; w < m.source.size(); ++w) {
    for (world u : m.target.successors(m.map[w])) {
      bool found = false;
      for (world v : m.source.successors(w)) found = found || m.map[v] == u;
      if (!found) return false;
    }
  }
  return true;
}

/// Bounded morphic images of F up to isomorphism. A surjection f determines
/// the only candidate relation f(R); it works iff the back condition holds.
/// Surjections are enumerated as restricted growth strings.
inline std::vector<FrameMap> bounded_morphic_images(Frame const& F) {
  std::vector<FrameMap> out;
  std::size_t n = F.size();
  std::vector<world> f(n, 0);
  std::function<void(std::size_t, world)> rec = [&](std::size_t i, world blocks) {
    if (i == n) {
      Frame T(blocks);
      for (auto [u, v] : F.edges()) T.add_edge(f[u], f[v]);
      FrameMap m{F, T, f};
      if (is_bounded_morphism(m)) out.push_back(std::move(m));
      return;
    }
    for (world b = 0; b <= blocks && b < n; ++b) {
      f[i] = b;
      rec(i + 1, b == blocks ? blocks + 1 : blocks);
    }
  };
  rec(0, 0);
  return out;
}

struct DefinabilityOptions {
  CheckOptions check;
  unsigned workers = 1;
};

/// Indices of the frames of U validating every formula of Φ over A.
inline std::vector<std::size_t> defined_class(LatticeAlgebra const& A,
                                              std::span<Formula const> phi,
                                              FrameUniverse const& U,
                                              DefinabilityOptions const& opt = {}) {
  std::vector<char> keep(U.frames.size(), 0);
  auto work = [&](std::size_t lo, std::size_t step) {
    for (std::size_t i = lo; i < U.frames.size(); i += step) {
      bool ok = true;
      for (auto const& f : phi) {
        if (!frame_validates(U.frames[i], A, f, opt.check)) {
          ok = false;
          break;
        }
      }
      keep[i] = ok;
    }
  };
  unsigned workers = std::max(1U, opt.workers);
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work, t, workers);
    for (auto& t : pool) t.join();
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i]) out.push_back(i);
  }
  return out;
}

struct DefinabilityComparison {
  std::vector<std::size_t> many_valued;  // defined_class(A, {f})
  std::vector<std::size_t> classical;    // defined_class(2, {g})
  std::vector<std::size_t> mismatches;   // symmetric difference
  bool identical() const noexcept { return mismatches.empty(); }
};

inline DefinabilityComparison compare_classes(std::vector<std::size_t> a,
                                              std::vector<std::size_t> b) {
  DefinabilityComparison r{std::move(a), std::move(b), {}};
  std::set_symmetric_difference(r.many_valued.begin(), r.many_valued.end(),
                                r.classical.begin(), r.classical.end(),
                                std::back_inserter(r.mismatches));
  return r;
}

/// The A-class of f against the 2-class of φ*.
inline DefinabilityComparison compare_definability(LatticeAlgebra const& A, Formula const& f,
                                                   FrameUniverse const& U,
                                                   DefinabilityOptions const& opt = {}) {
  Formula star = phi_star(A, f);
  return compare_classes(defined_class(A, std::span<Formula const>(&f, 1), U, opt),
                         defined_class(*two(), std::span<Formula const>(&star, 1), U, opt));
}

enum class Closure { generated_subframe, disjoint_union, bounded_morphic_image };

inline std::string_view to_string(Closure c) {
  switch (c) {
    case Closure::generated_subframe:
      return "generated_subframe";
    case Closure::disjoint_union:
      return "disjoint_union";
    case Closure::bounded_morphic_image:
      return "bounded_morphic_image";
  }
  return "?";
}

struct ClosureViolation {
  std::vector<std::size_t> sources;  // universe indices
  Frame result;
  std::string detail;
};

struct ClosureReport {
  Closure operation;
  std::size_t tested = 0;
  std::size_t not_tested = 0;  // constructions larger than the universe
  std::vector<ClosureViolation> violations;
  bool closed() const noexcept { return violations.empty(); }
};

/// Applies the construction to members of `subset` and lists results that
/// fall outside it (membership up to isomorphism). Disjoint unions are
/// formed for ordered pairs whose union fits the universe; larger ones are
/// counted as not tested.
inline ClosureReport closure_check(std::span<std::size_t const> subset, FrameUniverse const& U,
                                   Closure op) {
  std::set<std::pair<std::size_t, std::uint64_t>> members;
  for (auto i : subset) members.insert(canonical_form(U.frames.at(i)));
  auto inside = [&](Frame const& F) {
    return F.size() <= U.max_worlds && members.contains(canonical_form(F));
  };
  ClosureReport r{op};
  switch (op) {
    case Closure::generated_subframe:
      for (auto i : subset) {
        Frame const& F = U.frames[i];
        for (world w = 0; w < F.size(); ++w) {
          Frame G = generated_subframe(F, w);
          ++r.tested;
          if (!inside(G)) {
            r.violations.push_back({{i}, G, "generated by world " + std::to_string(w)});
          }
        }
      }
      break;
    case Closure::disjoint_union:
      for (auto i : subset) {
        for (auto j : subset) {
          if (U.frames[i].size() + U.frames[j].size() > U.max_worlds) {
            ++r.not_tested;
            continue;
          }
          std::vector<Frame> parts{U.frames[i], U.frames[j]};
          Frame D = disjoint_union(parts);
          ++r.tested;
          if (!inside(D)) r.violations.push_back({{i, j}, D, "disjoint union"});
        }
      }
      break;
    case Closure::bounded_morphic_image:
      for (auto i : subset) {
        for (auto const& m : bounded_morphic_images(U.frames[i])) {
          ++r.tested;
          if (!inside(m.target)) {
            std::string d = "image under";
            for (world x : m.map) d += " " + std::to_string(x);
            r.violations.push_back({{i}, m.target, d});
          }
        }
      }
      break;
  }
  return r;
}

}  // namespace mvml
