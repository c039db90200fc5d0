#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "mvml/builtins.hpp"
#include "mvml/congruence.hpp"
#include "mvml/evaluation.hpp"

namespace mvml {

/// The two-element Boolean algebra shared by all classical models.
inline std::shared_ptr<LatticeAlgebra const> two() {
  static auto const A = std::make_shared<LatticeAlgebra const>(boolean_power(1));
  return A;
}

namespace detail {

// ⋀/⋁ with optional constant folding and duplicate removal.
inline Formula mk_and(std::vector<Formula> fs, bool simplify) {
  if (!simplify) return big_and(fs);
  std::vector<Formula> kept;
  for (auto& f : fs) {
    if (f.is_op("bot")) return Formula::bot();
    if (f.is_op("top")) continue;
    if (std::find(kept.begin(), kept.end(), f) == kept.end()) kept.push_back(std::move(f));
  }
  return big_and(kept);
}

inline Formula mk_or(std::vector<Formula> fs, bool simplify) {
  if (!simplify) return big_or(fs);
  std::vector<Formula> kept;
  for (auto& f : fs) {
    if (f.is_op("top")) return Formula::top();
    if (f.is_op("bot")) continue;
    if (std::find(kept.begin(), kept.end(), f) == kept.end()) kept.push_back(std::move(f));
  }
  return big_or(kept);
}

inline Formula mk_dia(Formula f, bool simplify) {
  if (simplify && f.is_op("bot")) return f;
  return Formula::dia(std::move(f));
}

inline Formula mk_box(Formula f, bool simplify) {
  if (simplify && f.is_op("top")) return f;
  return Formula::box(std::move(f));
}

}  // namespace detail

/// The clause "f takes value a" for a non-variable f, with `sub(i, b)`
/// standing for "argument i takes value b". Connectives disjoin over the
/// argument tuples mapped to a; ◇ and □ disjoin over subsets S of A (the
/// empty one included) whose join, resp. meet, is a, and bound the
/// successors by □⋁_{b ≤ a}, resp. □⋁_{b ≥ a}.
template <class Sub>
Formula value_clause(LatticeAlgebra const& A, Formula const& f, element a, bool s, Sub&& sub) {
  std::size_t const k = A.size();
  if (f.is_modal()) {
    bool is_dia = f.kind() == Formula::Kind::dia;
    std::vector<Formula> options;
    for (std::uint64_t S = 0; S < (std::uint64_t{1} << k); ++S) {
      element acc = is_dia ? A.bottom() : A.top();
      std::vector<Formula> parts;
      for (element b = 0; b < k; ++b) {
        if (!((S >> b) & 1U)) continue;
        acc = is_dia ? A.join(acc, b) : A.meet(acc, b);
        parts.push_back(detail::mk_dia(sub(0, b), s));
      }
      if (acc == a) options.push_back(detail::mk_and(std::move(parts), s));
    }
    std::vector<Formula> bounded;
    for (element b = 0; b < k; ++b) {
      if (is_dia ? A.leq(b, a) : A.leq(a, b)) bounded.push_back(sub(0, b));
    }
    return detail::mk_and({detail::mk_or(std::move(options), s),
                           detail::mk_box(detail::mk_or(std::move(bounded), s), s)},
                          s);
  }
  std::size_t const arity = f.args().size();
  std::vector<element> tuple(arity, 0);
  std::vector<Formula> options;
  std::uint64_t rows = detail::power(k, static_cast<unsigned>(arity));
  for (std::uint64_t r = 0; r < rows; ++r) {
    std::uint64_t x = r;
    for (std::size_t i = arity; i-- > 0;) {
      tuple[i] = static_cast<element>(x % k);
      x /= k;
    }
    if (A.apply(f.op_name(), tuple) != a) continue;
    std::vector<Formula> parts;
    for (std::size_t i = 0; i < arity; ++i) parts.push_back(sub(i, tuple[i]));
    options.push_back(detail::mk_and(std::move(parts), s));
  }
  return detail::mk_or(std::move(options), s);
}

struct TranslateOptions {
  bool simplify = false;
};

/// T^a over one algebra, memoised per (subformula, a) so that repeated
/// calls share structure.
class Translator {
 public:
  explicit Translator(LatticeAlgebra const& A, TranslateOptions opt = {}) : A_(A), opt_(opt) {}

  LatticeAlgebra const& algebra() const noexcept { return A_; }

  Formula operator()(Formula const& f, element a) {
    if (a >= A_.size()) {
      throw DomainError("element " + std::to_string(a) + " outside " + A_.name());
    }
    auto key = std::pair{f.id(), a};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second.second;
    Formula r = build(f, a);
    memo_.emplace(key, std::pair{f, r});  // holding f keeps its address unique
    return r;
  }

 private:
  Formula build(Formula const& f, element a) {
    if (f.is_var()) {
      Var v = f.var();
      if (v.kind != Var::Kind::plain) {
        throw DomainError("only plain letters can be translated, got " + to_string(v));
      }
      return Formula::variable(Var::star(v.index, a));
    }
    return value_clause(A_, f, a, opt_.simplify, [&](std::size_t i, element b) {
      return (*this)(f.args()[i], b);
    });
  }

  struct KeyHash {
    std::size_t operator()(std::pair<void const*, element> const& k) const noexcept {
      return detail::hash_combine(std::hash<void const*>{}(k.first), k.second);
    }
  };

  LatticeAlgebra const& A_;
  TranslateOptions opt_;
  std::unordered_map<std::pair<void const*, element>, std::pair<Formula, Formula>, KeyHash>
      memo_;
};

/// T^a(f): a classical formula over the letters p_i@b.
inline Formula translate_value(LatticeAlgebra const& A, Formula const& f, element a,
                               TranslateOptions opt = {}) {
  return Translator(A, opt)(f, a);
}

/// M*: the same frame with p_i@a true at w iff V(p_i, w) = a.
inline Model star_model(Model const& M) {
  Valuation v;
  std::size_t n = M.frame.size();
  for (auto const& [x, vals] : M.valuation) {
    if (x.kind != Var::Kind::plain) continue;
    for (element a = 0; a < M.algebra->size(); ++a) {
      auto& row = v[Var::star(x.index, a)];
      row.assign(n, 0);
      for (world w = 0; w < n; ++w) row[w] = vals[w] == a ? 1 : 0;
    }
  }
  return Model(M.frame, two(), std::move(v));
}

struct SwitchReport {
  std::size_t checks = 0;      // (world, a) pairs compared
  std::size_t mismatches = 0;  // value = a disagrees with M* ⊨ T^a
  std::size_t not_exactly_one = 0;  // worlds where the number of true T^a is not 1
};

/// Compares ⟦f⟧_w = a with ⟨M*, w⟩ ⊨ T^a(f) for every world and element.
inline SwitchReport switch_check_report(Model const& M, Formula const& f, Translator& T) {
  LatticeAlgebra const& A = *M.algebra;
  std::size_t const n = M.frame.size();
  auto values = eval_all(M, f);
  Model S = star_model(M);
  std::vector<Formula> ts;
  for (element a = 0; a < A.size(); ++a) ts.push_back(T(f, a));
  std::vector<Var> vars;
  for (auto const& [x, row] : S.valuation) vars.push_back(x);
  CompiledFormula cf(*S.algebra, ts, vars);
  std::vector<element> buf;
  cf.run(S.frame, detail::flat_valuation(S, vars), buf);
  SwitchReport r;
  element one = S.algebra->top();
  for (world w = 0; w < n; ++w) {
    std::size_t count = 0;
    for (element a = 0; a < A.size(); ++a) {
      bool holds = cf.value(buf, a, n, w) == one;
      count += holds;
      ++r.checks;
      if (holds != (values[w] == a)) ++r.mismatches;
    }
    if (count != 1) ++r.not_exactly_one;
  }
  return r;
}

/// The Switch Lemma on one model: ⟦f⟧_w = a iff ⟨M*, w⟩ ⊨ T^a(f).
inline bool switch_check(Model const& M, Formula const& f) {
  Translator T(*M.algebra);
  return switch_check_report(M, f, T).mismatches == 0;
}

/// T*(τ): for each letter, ⋁_a p@a and ¬(p@a ∧ p@b) for a < b. Letters in
/// index order, then elements in index order.
inline std::vector<Formula> tstar_theory(LatticeAlgebra const& A, std::set<Var> const& vars) {
  std::vector<Formula> out;
  for (Var x : vars) {
    if (x.kind != Var::Kind::plain) continue;
    std::vector<Formula> some;
    for (element a = 0; a < A.size(); ++a) some.push_back(var(Var::star(x.index, a)));
    out.push_back(big_or(some));
    for (element a = 0; a < A.size(); ++a) {
      for (element b = a + 1; b < A.size(); ++b) out.push_back(neg(conj(some[a], some[b])));
    }
  }
  return out;
}

/// Reads an A-valued model back from a classical model satisfying T*(τ)
/// globally. Throws PreconditionError naming the first (letter, world) pair
/// without exactly one true tag.
inline Model reconstruct_model(Model const& N, std::shared_ptr<LatticeAlgebra const> A,
                               std::set<Var> const& vars) {
  std::size_t n = N.frame.size();
  Valuation v;
  for (Var x : vars) {
    if (x.kind != Var::Kind::plain) continue;
    auto& row = v[x];
    row.assign(n, 0);
    for (world w = 0; w < n; ++w) {
      std::size_t count = 0;
      for (element a = 0; a < A->size(); ++a) {
        if (N.value(Var::star(x.index, a), w) == N.algebra->top()) {
          row[w] = a;
          ++count;
        }
      }
      if (count != 1) {
        throw PreconditionError("letter " + to_string(x) + " has " + std::to_string(count) +
                                " true tags at world " + std::to_string(w));
      }
    }
  }
  return Model(N.frame, std::move(A), std::move(v));
}

/// φ* = (⋁_{m ≤ rank T^1(φ)} ¬□^m ⋀T*(τ)) ∨ T^1(φ) with τ the letters of φ.
inline Formula phi_star(LatticeAlgebra const& A, Formula const& f, TranslateOptions opt = {}) {
  Formula t1 = translate_value(A, f, A.top(), opt);
  Formula axioms = big_and(tstar_theory(A, variables(f)));
  std::vector<Formula> guards;
  for (unsigned m = 0; m <= modal_rank(t1); ++m) guards.push_back(neg(box_power(m, axioms)));
  return disj(big_or(guards), t1);
}

/// Reads a classical formula in A: ¬ becomes u, everything else is kept.
inline Formula interpret_classical(Formula const& f, UnaryTerm const& u) {
  std::unordered_map<void const*, Formula> memo;
  std::function<Formula(Formula const&)> go = [&](Formula const& g) -> Formula {
    if (auto it = memo.find(g.id()); it != memo.end()) return it->second;
    Formula r = g;
    switch (g.kind()) {
      case Formula::Kind::var:
        break;
      case Formula::Kind::dia:
        r = Formula::dia(go(g.child()));
        break;
      case Formula::Kind::box:
        r = Formula::box(go(g.child()));
        break;
      case Formula::Kind::op:
        if (g.is_op("neg") && g.args().size() == 1) {
          r = u.apply(go(g.args()[0]));
        } else if ((g.is_op("and") || g.is_op("or")) && g.args().size() == 2) {
          r = Formula::op(g.op_name(), {go(g.args()[0]), go(g.args()[1])});
        } else if ((g.is_op("top") || g.is_op("bot")) && g.args().empty()) {
          break;
        } else {
          throw SignatureError("'" + g.op_name() + "' is not a classical connective");
        }
        break;
    }
    memo.emplace(g.id(), r);
    return r;
  };
  return go(f);
}

/// t(g): substitutes g for x in t.
inline Formula t_wrap(UnaryTerm const& t, Formula const& g) { return t.apply(g); }

/// The quotient-valued model M' with V'(p, w) = [V(p, w)] for an
/// interpretation of a Boolean algebra in M's algebra.
inline Model interpreted_model(Model const& M, Interpretation const& I) {
  Valuation v;
  for (auto const& [x, row] : M.valuation) {
    auto& out = v[x];
    for (element e : row) out.push_back(static_cast<element>(I.kernel.block_of(e)));
  }
  return Model(M.frame, std::make_shared<LatticeAlgebra const>(I.quotient), std::move(v));
}

/// Component i of a model over boolean_power(k): the classical model with
/// V_i(p, w) = bit i of V(p, w).
inline Model boolean_component(Model const& M, unsigned i) {
  LatticeAlgebra const& B = *M.algebra;
  for (element a = 0; a < B.size(); ++a) {
    for (element b = 0; b < B.size(); ++b) {
      if (B.leq(a, b) != ((a & b) == a)) {
        throw PreconditionError(B.name() + " is not laid out as a power of 2");
      }
    }
  }
  if ((std::size_t{1} << i) >= B.size()) throw DomainError("no component " + std::to_string(i));
  Valuation v;
  for (auto const& [x, row] : M.valuation) {
    auto& out = v[x];
    for (element e : row) out.push_back((e >> i) & 1U);
  }
  return Model(M.frame, two(), std::move(v));
}

}  // namespace mvml
