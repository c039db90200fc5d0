#pragma once

// Two-valued modal formulas on a fixed finite frame, grounded to CNF.
// Each (subformula, world) pair gets a Tseitin variable; letters get one
// variable per world. ◇ at w is the disjunction over successors, □ the
// conjunction, so dead ends give false and true respectively.

#include <map>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mvml/evaluation.hpp"
#include "mvml/sat.hpp"

namespace mvml {

class Grounder {
 public:
  Grounder(sat::Solver& s, Frame const& F, LatticeAlgebra const& A)
      : s_(s), F_(F), A_(A) {
    if (A.size() != 2) {
      throw PreconditionError("SAT grounding needs a two-element algebra, " + A.name() +
                              " has " + std::to_string(A.size()) + " elements");
    }
    true_ = sat::Lit::pos(s_.new_var());
    s_.add_clause({true_});
  }

  sat::Lit truth() const { return true_; }

  sat::Lit letter(Var v, world w) {
    auto [it, fresh] = letters_.try_emplace({v, w}, 0);
    if (fresh) it->second = s_.new_var();
    return sat::Lit::pos(it->second);
  }

  /// Literal equivalent to "f holds at w".
  sat::Lit at(Formula const& f, world w) {
    auto key = std::pair{f.id(), w};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    sat::Lit out = build(f, w);
    memo_.emplace(key, out);
    return out;
  }

  /// Truth of each grounded letter in the last model; missing entries are false.
  Valuation valuation(std::vector<Var> const& vars) const {
    Valuation v;
    for (auto const& x : vars) {
      auto& row = v[x];
      row.assign(F_.size(), A_.bottom());
      for (world w = 0; w < F_.size(); ++w) {
        auto it = letters_.find({x, w});
        if (it != letters_.end() && s_.model_value(it->second)) row[w] = A_.top();
      }
    }
    return v;
  }

 private:
  struct KeyHash {
    std::size_t operator()(std::pair<void const*, world> const& k) const noexcept {
      return detail::hash_combine(std::hash<void const*>{}(k.first), k.second);
    }
  };

  sat::Lit gate_and(std::vector<sat::Lit> const& in) {
    if (in.empty()) return true_;
    if (in.size() == 1) return in[0];
    sat::Lit o = sat::Lit::pos(s_.new_var());
    std::vector<sat::Lit> big{o};
    for (auto l : in) {
      s_.add_clause({~o, l});
      big.push_back(~l);
    }
    s_.add_clause(big);
    return o;
  }

  sat::Lit gate_or(std::vector<sat::Lit> const& in) {
    std::vector<sat::Lit> neg;
    for (auto l : in) neg.push_back(~l);
    return ~gate_and(neg);
  }

  sat::Lit build(Formula const& f, world w) {
    switch (f.kind()) {
      case Formula::Kind::var:
        return letter(f.var(), w);
      case Formula::Kind::dia:
      case Formula::Kind::box: {
        std::vector<sat::Lit> in;
        for (world v : F_.successors(w)) in.push_back(at(f.child(), v));
        return f.kind() == Formula::Kind::dia ? gate_or(in) : gate_and(in);
      }
      case Formula::Kind::op:
        break;
    }
    auto const& name = f.op_name();
    auto args = f.args();
    if (name == "top" && args.empty()) return true_;
    if (name == "bot" && args.empty()) return ~true_;
    if (name == "and" && args.size() == 2) return gate_and({at(args[0], w), at(args[1], w)});
    if (name == "or" && args.size() == 2) return gate_or({at(args[0], w), at(args[1], w)});
    auto const& o = A_.op(name);
    if (o.arity != args.size()) {
      throw SignatureError("operation '" + name + "' expects " + std::to_string(o.arity) +
                           " arguments");
    }
    auto value_of = [&](element e) { return e == A_.top(); };
    if (args.empty()) return value_of(o.table.at(0)) ? true_ : ~true_;
    std::vector<sat::Lit> in;
    for (auto const& a : args) in.push_back(at(a, w));
    if (name == "neg" && o.arity == 1 && value_of(o.table[A_.bottom()]) &&
        !value_of(o.table[A_.top()])) {
      return ~in[0];
    }
    // One clause per input row: (inputs = row) -> (o = table[row]).
    sat::Lit out = sat::Lit::pos(s_.new_var());
    std::size_t rows = std::size_t{1} << args.size();
    for (std::size_t r = 0; r < rows; ++r) {
      std::size_t idx = 0;
      std::vector<sat::Lit> clause;
      for (std::size_t i = 0; i < args.size(); ++i) {
        bool bit = (r >> (args.size() - 1 - i)) & 1U;
        idx = idx * 2 + (bit ? A_.top() : A_.bottom());
        clause.push_back(bit ? ~in[i] : in[i]);
      }
      clause.push_back(value_of(o.table[idx]) ? out : ~out);
      s_.add_clause(clause);
    }
    return out;
  }

  sat::Solver& s_;
  Frame const& F_;
  LatticeAlgebra const& A_;
  sat::Lit true_;
  std::map<std::pair<Var, world>, std::uint32_t> letters_;
  std::unordered_map<std::pair<void const*, world>, sat::Lit, KeyHash> memo_;
};

/// Γ ⊨ f on one frame over a two-element algebra, decided by SAT: the
/// premises hold at every world and f fails somewhere.
inline Verdict sat_consequence(Frame const& F, LatticeAlgebra const& A,
                               std::span<Formula const> premises, Formula const& f) {
  sat::Solver s;
  Grounder g(s, F, A);
  bool possible = true;
  for (auto const& p : premises) {
    for (world w = 0; w < F.size() && possible; ++w) possible = s.add_clause({g.at(p, w)});
  }
  std::vector<sat::Lit> fails;
  for (world w = 0; w < F.size(); ++w) fails.push_back(~g.at(f, w));
  if (possible) possible = s.add_clause(fails);

  Verdict v;
  if (!possible || s.solve() == sat::Result::unsat) return v;
  std::vector<Formula> all(premises.begin(), premises.end());
  all.push_back(f);
  auto vs = variables(std::span<Formula const>(all));
  v.holds = false;
  v.counterexample.emplace(F, std::make_shared<LatticeAlgebra const>(A),
                           g.valuation(std::vector<Var>(vs.begin(), vs.end())));
  for (world w = 0; w < F.size(); ++w) {
    if (!s.model_value(g.at(f, w))) {
      v.failing_world = w;
      break;
    }
  }
  return v;
}

}  // namespace mvml
