#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "mvml/translation.hpp"

namespace mvml {

/// Distinct subformulas of a list of formulas, numbered in post-order of
/// first occurrence. Structurally equal subformulas share one id, and so
/// one family of letters q<id>@a.
class SubformulaIndex {
 public:
  SubformulaIndex() = default;
  explicit SubformulaIndex(std::span<Formula const> fs) {
    for (auto const& f : fs) add(f);
  }

  std::uint32_t add(Formula const& f) {
    if (auto it = ids_.find(f); it != ids_.end()) return it->second;
    for (auto const& a : f.args()) add(a);
    auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(f);
    ids_.emplace(f, id);
    return id;
  }

  std::uint32_t id(Formula const& f) const {
    auto it = ids_.find(f);
    if (it == ids_.end()) throw DomainError("formula is not indexed: " + print(f));
    return it->second;
  }

  std::size_t size() const noexcept { return nodes_.size(); }
  Formula const& at(std::uint32_t id) const { return nodes_.at(id); }
  std::vector<Formula> const& nodes() const noexcept { return nodes_; }

  /// The letter q_ψ^a.
  Formula letter(Formula const& f, element a) const { return var(Var::q(id(f), a)); }

 private:
  std::vector<Formula> nodes_;
  std::unordered_map<Formula, std::uint32_t, FormulaHash> ids_;
};

/// T*(τ) over q-letters of the propositional variables, plus one E(ψ) per
/// non-variable subformula ψ and element a.
struct DefinitionalTheory {
  SubformulaIndex index;
  std::vector<Formula> exactly_one;
  std::vector<Formula> equivalences;

  std::vector<Formula> axioms() const {
    std::vector<Formula> out = exactly_one;
    out.insert(out.end(), equivalences.begin(), equivalences.end());
    return out;
  }
};

inline DefinitionalTheory e_axioms(LatticeAlgebra const& A, std::span<Formula const> fs,
                                   TranslateOptions opt = {}) {
  DefinitionalTheory th;
  th.index = SubformulaIndex(fs);
  auto const& idx = th.index;
  std::vector<std::pair<Var, Formula>> letters;
  for (auto const& g : idx.nodes()) {
    if (g.is_var()) letters.emplace_back(g.var(), g);
  }
  std::sort(letters.begin(), letters.end(),
            [](auto const& x, auto const& y) { return x.first < y.first; });
  for (auto const& [v, g] : letters) {
    std::vector<Formula> some;
    for (element a = 0; a < A.size(); ++a) some.push_back(idx.letter(g, a));
    th.exactly_one.push_back(big_or(some));
    for (element a = 0; a < A.size(); ++a) {
      for (element b = a + 1; b < A.size(); ++b) {
        th.exactly_one.push_back(neg(conj(some[a], some[b])));
      }
    }
  }
  for (auto const& g : idx.nodes()) {
    if (g.is_var()) continue;
    for (element a = 0; a < A.size(); ++a) {
      Formula rhs = value_clause(A, g, a, opt.simplify, [&](std::size_t i, element b) {
        return idx.letter(g.args()[i], b);
      });
      th.equivalences.push_back(iff(idx.letter(g, a), rhs));
    }
  }
  return th;
}

inline DefinitionalTheory e_axioms(LatticeAlgebra const& A, Formula const& f,
                                   TranslateOptions opt = {}) {
  return e_axioms(A, std::span<Formula const>(&f, 1), opt);
}

struct ReducedConsequence {
  std::vector<Formula> premises;
  Formula conclusion;
  DefinitionalTheory theory;
};

/// Γ ⊨_A f  iff  {q^1_θ | θ ∈ Γ} ∪ T* ∪ E ⊨_2 q^1_f, with the theory over
/// the subformulas of Γ ∪ {f}.
inline ReducedConsequence reduce_consequence(LatticeAlgebra const& A,
                                             std::span<Formula const> gamma,
                                             Formula const& f, TranslateOptions opt = {}) {
  std::vector<Formula> all(gamma.begin(), gamma.end());
  all.push_back(f);
  auto th = e_axioms(A, all, opt);
  std::vector<Formula> premises;
  for (auto const& g : gamma) premises.push_back(th.index.letter(g, A.top()));
  for (auto const& ax : th.axioms()) premises.push_back(ax);
  Formula concl = th.index.letter(f, A.top());
  return {std::move(premises), std::move(concl), std::move(th)};
}

/// ⊨_A f  iff  ⊨_2 (⋀_{m ≤ rank f} □^m ⋀(T* ∪ E)) ⇒ q^1_f.
inline Formula reduce_validity(LatticeAlgebra const& A, Formula const& f,
                               TranslateOptions opt = {}) {
  auto th = e_axioms(A, f, opt);
  Formula all = big_and(th.axioms());
  std::vector<Formula> layers;
  for (unsigned m = 0; m <= modal_rank(f); ++m) layers.push_back(box_power(m, all));
  return implies(big_and(layers), th.index.letter(f, A.top()));
}

/// The classical model over q-letters in which q_ψ^a holds at w iff
/// ⟦ψ⟧_w = a, for every indexed subformula ψ.
inline Model definitional_model(Model const& M, SubformulaIndex const& idx) {
  Valuation v;
  std::size_t n = M.frame.size();
  for (std::uint32_t id = 0; id < idx.size(); ++id) {
    auto vals = eval_all(M, idx.at(id));
    for (element a = 0; a < M.algebra->size(); ++a) {
      auto& row = v[Var::q(id, a)];
      row.assign(n, 0);
      for (world w = 0; w < n; ++w) row[w] = vals[w] == a ? 1 : 0;
    }
  }
  return Model(M.frame, two(), std::move(v));
}

/// Length of a formula read as a tree (node count).
inline std::size_t length(Formula const& f) { return f.size(); }

}  // namespace mvml
