#pragma once

// SAT-based decision procedure for K. A world is a propositional problem over
// its letters and box atoms; every box atom □χ left false asks for a
// successor satisfying ¬χ together with the arguments of the true box atoms.
// A successor that cannot exist becomes a clause of the parent problem.
// Meant for the large instances produced by the reductions, where the
// tableau's chronological backtracking does not scale.

#include <algorithm>
#include <optional>
#include <unordered_map>
#include <vector>

#include "mvml/sat.hpp"
#include "mvml/tableau.hpp"

namespace mvml {

namespace detail {

class KSat {
 public:
  explicit KSat(TableauOptions opt) : opt_(opt) {}

  TableauResult run(Formula const& f) {
    if (!is_classical(f)) {
      throw SignatureError("the K solver takes classical formulas (and, or, neg, top, bot)");
    }
    TableauResult r;
    auto tree = solve({f});
    r.nodes = nodes_;
    r.satisfiable = tree.has_value();
    if (tree) r.model = std::move(*tree);
    return r;
  }

 private:
  static Formula negate(Formula const& f) { return f.is_op("neg") ? f.args()[0] : neg(f); }

  class Encoder {
   public:
    explicit Encoder(sat::Solver& s) : s_(s) {
      true_ = sat::Lit::pos(s_.new_var());
      s_.add_clause({true_});
    }

    sat::Lit at(Formula const& f) {
      if (auto it = memo_.find(f); it != memo_.end()) return it->second;
      sat::Lit out = build(f);
      memo_.emplace(f, out);
      return out;
    }

    std::vector<std::pair<Formula, sat::Lit>> const& boxes() const { return boxes_; }
    std::vector<std::pair<Var, sat::Lit>> const& letters() const { return letters_; }
    sat::Lit box_atom(Formula const& arg) { return at(box(arg)); }

   private:
    sat::Lit fresh() { return sat::Lit::pos(s_.new_var()); }

    sat::Lit build(Formula const& f) {
      switch (f.kind()) {
        case Formula::Kind::var: {
          auto l = fresh();
          letters_.emplace_back(f.var(), l);
          return l;
        }
        case Formula::Kind::box: {
          auto l = fresh();
          boxes_.emplace_back(f.child(), l);
          return l;
        }
        case Formula::Kind::dia:
          return ~at(box(negate(f.child())));
        case Formula::Kind::op:
          break;
      }
      if (f.is_op("top")) return true_;
      if (f.is_op("bot")) return ~true_;
      if (f.is_op("neg")) return ~at(f.args()[0]);
      sat::Lit a = at(f.args()[0]), b = at(f.args()[1]);
      sat::Lit g = fresh();
      if (f.is_op("and")) {
        s_.add_clause({~g, a});
        s_.add_clause({~g, b});
        s_.add_clause({g, ~a, ~b});
      } else {
        s_.add_clause({g, ~a});
        s_.add_clause({g, ~b});
        s_.add_clause({~g, a, b});
      }
      return g;
    }

    sat::Solver& s_;
    sat::Lit true_;
    std::unordered_map<Formula, sat::Lit, FormulaHash> memo_;
    std::vector<std::pair<Formula, sat::Lit>> boxes_;
    std::vector<std::pair<Var, sat::Lit>> letters_;
  };

  void tick() {
    if (++nodes_ > opt_.node_budget) {
      throw ResourceError("K solver exceeded " + std::to_string(opt_.node_budget) + " steps");
    }
  }

  struct Key {
    std::vector<Formula> fs;
    std::size_t hash = 0;
    friend bool operator==(Key const& a, Key const& b) { return a.fs == b.fs; }
  };
  struct KeyHash {
    std::size_t operator()(Key const& k) const noexcept { return k.hash; }
  };

  static Key key_of(std::vector<Formula> fs) {
    std::sort(fs.begin(), fs.end(),
              [](Formula const& a, Formula const& b) { return a.hash() < b.hash(); });
    fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
    Key k{std::move(fs), 0};
    for (auto const& f : k.fs) k.hash = hash_combine(k.hash, f.hash());
    return k;
  }

  /// A tree model whose root satisfies every formula of `fs`, if one exists.
  std::optional<TreeModel> solve(std::vector<Formula> const& fs) {
    Key key = key_of(fs);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    tick();
    sat::Solver s;
    Encoder e(s);
    for (auto const& f : key.fs) s.add_clause({e.at(f)});
    std::optional<TreeModel> result;
    while (s.solve() == sat::Result::sat) {
      tick();
      std::vector<Formula> held;
      std::vector<std::pair<Formula, sat::Lit>> open;
      for (auto const& [arg, l] : e.boxes()) {
        if (s.model_value(l)) held.push_back(arg);
        else open.emplace_back(arg, l);
      }
      TreeModel tm;
      tm.true_letters.emplace_back();
      for (auto const& [v, l] : e.letters()) {
        if (s.model_value(l)) tm.true_letters[0].insert(v);
      }
      bool ok = true;
      for (auto const& [chi, l] : open) {
        std::vector<Formula> child{negate(chi)};
        child.insert(child.end(), held.begin(), held.end());
        auto sub = solve(child);
        if (sub) {
          graft(tm, *sub);
          continue;
        }
        // Shrink the set of box arguments that rule the successor out.
        std::vector<Formula> core = held;
        for (std::size_t i = core.size(); i-- > 0;) {
          std::vector<Formula> trial{negate(chi)};
          for (std::size_t j = 0; j < core.size(); ++j)
            if (j != i) trial.push_back(core[j]);
          if (!solve(trial)) core.erase(core.begin() + static_cast<std::ptrdiff_t>(i));
        }
        std::vector<sat::Lit> lemma{l};
        for (auto const& psi : core) lemma.push_back(~e.box_atom(psi));
        s.add_clause(std::move(lemma));
        ok = false;
        break;
      }
      if (ok) {
        result = std::move(tm);
        break;
      }
    }
    cache_.emplace(std::move(key), result);
    return result;
  }

  static void graft(TreeModel& tm, TreeModel const& sub) {
    auto off = static_cast<world>(tm.size());
    tm.edges.emplace_back(0, off);
    for (auto const& ls : sub.true_letters) tm.true_letters.push_back(ls);
    for (auto [u, v] : sub.edges) tm.edges.emplace_back(u + off, v + off);
  }

  TableauOptions opt_;
  std::unordered_map<Key, std::optional<TreeModel>, KeyHash> cache_;
  std::uint64_t nodes_ = 0;
};

}  // namespace detail

/// Satisfiability in K by the SAT-based procedure; same result shape as the
/// tableau (the model is a tree rooted at world 0).
inline TableauResult k_solver_sat(Formula const& f, TableauOptions opt = {}) {
  return detail::KSat(opt).run(f);
}

inline TableauResult k_solver_valid(Formula const& f, TableauOptions opt = {}) {
  return k_solver_sat(neg(f), opt);
}

}  // namespace mvml
