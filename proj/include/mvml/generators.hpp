#pragma once

// Seeded random formulas and valuations. Draws use `engine() % n` on
// std::mt19937_64 so that sequences agree across standard libraries.

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "mvml/evaluation.hpp"

namespace mvml {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform-ish integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : engine_() % n; }
  bool chance(unsigned percent) { return below(100) < percent; }

 private:
  std::mt19937_64 engine_;
};

struct FormulaShape {
  std::uint32_t letters = 2;  // p1..p<letters>
  unsigned max_rank = 2;
  unsigned max_depth = 4;  // connective nesting, modalities included
  bool constants = true;   // allow top and bot leaves
};

/// Random formulas over the connectives of `sig` (and/or always, plus every
/// other operation of positive arity).
class FormulaGenerator {
 public:
  FormulaGenerator(Signature const& sig, FormulaShape shape) : shape_(shape) {
    for (auto const& [name, arity] : sig.ops()) {
      if (arity > 0) ops_.emplace_back(name, arity);
    }
  }

  Formula operator()(Rng& rng) { return gen(rng, shape_.max_depth, shape_.max_rank); }

 private:
  Formula leaf(Rng& rng) {
    if (shape_.constants && rng.chance(8)) {
      return rng.below(2) ? Formula::top() : Formula::bot();
    }
    return p(static_cast<std::uint32_t>(1 + rng.below(shape_.letters)));
  }

  Formula gen(Rng& rng, unsigned depth, unsigned rank) {
    if (depth == 0 || rng.chance(25)) return leaf(rng);
    std::uint64_t choices = ops_.size() + (rank > 0 ? 2 : 0);
    std::uint64_t c = rng.below(choices);
    if (c >= ops_.size()) {
      Formula g = gen(rng, depth - 1, rank - 1);
      return c == ops_.size() ? Formula::dia(std::move(g)) : Formula::box(std::move(g));
    }
    auto const& [name, arity] = ops_[c];
    std::vector<Formula> args;
    for (unsigned i = 0; i < arity; ++i) args.push_back(gen(rng, depth - 1, rank));
    return Formula::op(name, std::move(args));
  }

  FormulaShape shape_;
  std::vector<std::pair<std::string, unsigned>> ops_;
};

/// Uniform valuation of `letters` on an n-world frame.
inline Valuation random_valuation(Rng& rng, std::vector<Var> const& letters, std::size_t n,
                                  std::size_t k) {
  Valuation v;
  for (Var x : letters) {
    auto& row = v[x];
    for (std::size_t w = 0; w < n; ++w) row.push_back(static_cast<element>(rng.below(k)));
  }
  return v;
}

}  // namespace mvml
