#pragma once

// Tableau for the basic modal logic K, and an independent decision
// procedure by type elimination used to cross-check it.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "mvml/evaluation.hpp"
#include "mvml/translation.hpp"

namespace mvml {

/// A finite tree Kripke model: world 0 is the root.
struct TreeModel {
  std::vector<std::set<Var>> true_letters;
  std::vector<std::pair<world, world>> edges;

  std::size_t size() const noexcept { return true_letters.size(); }

  /// As a classical model over `letters` (letters absent from a world are false).
  Model to_model(std::set<Var> const& letters) const {
    Frame F(size(), edges);
    Valuation v;
    for (Var x : letters) {
      auto& row = v[x];
      row.assign(size(), 0);
      for (world w = 0; w < size(); ++w) row[w] = true_letters[w].contains(x) ? 1 : 0;
    }
    return Model(std::move(F), two(), std::move(v));
  }
};

struct TableauResult {
  bool satisfiable = false;
  std::optional<TreeModel> model;  // on satisfiable
  std::uint64_t nodes = 0;         // tableau nodes expanded
};

struct TableauOptions {
  std::uint64_t node_budget = 5'000'000;
};

namespace detail {

class KTableau {
 public:
  explicit KTableau(TableauOptions opt) : opt_(opt) {}

  TableauResult run(Formula const& f) {
    if (!is_classical(f)) {
      throw SignatureError("the K tableau takes classical formulas (and, or, neg, top, bot)");
    }
    int root = nnf(f, true);
    TreeModel tm;
    TableauResult r;
    r.satisfiable = start_world({root}, tm);
    r.nodes = nodes_;
    if (r.satisfiable) r.model = std::move(tm);
    return r;
  }

 private:
  enum class K : std::uint8_t { top, bot, lit, conj, disj, dia, box };
  struct N {
    K k;
    Var v{};
    bool pos = true;
    int a = -1, b = -1;
    friend auto operator<=>(N const&, N const&) = default;
  };

  int intern(N n) {
    auto [it, fresh] = ids_.try_emplace(n, static_cast<int>(pool_.size()));
    if (fresh) pool_.push_back(n);
    return it->second;
  }

  // Negation normal form of f (pos) or of ¬f (!pos).
  int nnf(Formula const& f, bool pos) {
    auto key = std::pair{f.id(), pos};
    if (auto it = nnf_memo_.find(key); it != nnf_memo_.end()) return it->second.second;
    int r = -1;
    switch (f.kind()) {
      case Formula::Kind::var:
        r = intern({K::lit, f.var(), pos});
        break;
      case Formula::Kind::dia:
        r = intern({pos ? K::dia : K::box, {}, true, nnf(f.child(), pos)});
        break;
      case Formula::Kind::box:
        r = intern({pos ? K::box : K::dia, {}, true, nnf(f.child(), pos)});
        break;
      case Formula::Kind::op:
        if (f.is_op("top")) {
          r = intern({pos ? K::top : K::bot});
        } else if (f.is_op("bot")) {
          r = intern({pos ? K::bot : K::top});
        } else if (f.is_op("neg")) {
          r = nnf(f.args()[0], !pos);
        } else {
          bool is_and = f.is_op("and");
          K k = (is_and == pos) ? K::conj : K::disj;
          r = intern({k, {}, true, nnf(f.args()[0], pos), nnf(f.args()[1], pos)});
        }
        break;
    }
    nnf_memo_.emplace(key, std::pair{f, r});
    return r;
  }

  int complement_lit(int id) {
    N n = pool_[id];
    n.pos = !n.pos;
    auto it = ids_.find(n);
    return it == ids_.end() ? -1 : it->second;
  }

  struct Branch {
    std::set<int> label;
    std::vector<int> pending;  // non-branching work, LIFO
    std::vector<int> ors;      // deferred disjunctions, FIFO
    std::size_t or_head = 0;
  };

  void tick() {
    if (++nodes_ > opt_.node_budget) {
      throw ResourceError("tableau exceeded " + std::to_string(opt_.node_budget) + " nodes");
    }
  }

  bool has(Branch const& b, int id) const { return id >= 0 && b.label.contains(id); }

  // Saturates a world's label, branching on disjunctions left first, then
  // expands its modal demands.
  bool start_world(std::vector<int> const& start, TreeModel& tm) {
    Branch b;
    b.pending.assign(start.rbegin(), start.rend());
    return saturate(std::move(b), tm);
  }

  bool saturate(Branch b, TreeModel& tm) {
    tick();
    while (true) {
      while (!b.pending.empty()) {
        int x = b.pending.back();
        b.pending.pop_back();
        if (!b.label.insert(x).second) continue;
        N const n = pool_[x];
        switch (n.k) {
          case K::top:
          case K::dia:
          case K::box:
            break;
          case K::bot:
            return false;
          case K::lit:
            if (has(b, complement_lit(x))) return false;
            break;
          case K::conj:
            b.pending.push_back(n.b);
            b.pending.push_back(n.a);
            break;
          case K::disj:
            b.ors.push_back(x);
            break;
        }
      }
      // Next disjunction that is not yet satisfied.
      while (b.or_head < b.ors.size()) {
        N const n = pool_[b.ors[b.or_head]];
        if (has(b, n.a) || has(b, n.b)) {
          ++b.or_head;
          continue;
        }
        break;
      }
      if (b.or_head == b.ors.size()) break;
      N const n = pool_[b.ors[b.or_head++]];
      bool left_dead = is_refuted(b, n.a), right_dead = is_refuted(b, n.b);
      if (left_dead && right_dead) return false;
      if (left_dead || right_dead) {
        b.pending.push_back(left_dead ? n.b : n.a);
        continue;
      }
      Branch right = b;
      b.pending.push_back(n.a);
      auto saved = tm;
      if (saturate(std::move(b), tm)) return true;
      tm = std::move(saved);
      right.pending.push_back(n.b);
      return saturate(std::move(right), tm);
    }
    return expand(b, tm);
  }

  bool is_refuted(Branch const& b, int id) {
    N const& n = pool_[id];
    if (n.k == K::bot) return true;
    if (n.k == K::lit) return has(b, complement_lit(id));
    return false;
  }

  bool expand(Branch const& b, TreeModel& tm) {
    world self = static_cast<world>(tm.size());
    tm.true_letters.emplace_back();
    for (int x : b.label) {
      if (pool_[x].k == K::lit && pool_[x].pos) tm.true_letters[self].insert(pool_[x].v);
    }
    std::vector<int> boxes;
    for (int x : b.label) {
      if (pool_[x].k == K::box) boxes.push_back(pool_[x].a);
    }
    for (int x : b.label) {
      if (pool_[x].k != K::dia) continue;
      std::vector<int> start{pool_[x].a};
      start.insert(start.end(), boxes.begin(), boxes.end());
      world child = static_cast<world>(tm.size());
      tm.edges.emplace_back(self, child);
      Branch cb;
      cb.pending.assign(start.rbegin(), start.rend());
      if (!saturate(std::move(cb), tm)) return false;
    }
    return true;
  }

  struct PairHash {
    std::size_t operator()(std::pair<void const*, bool> const& k) const noexcept {
      return std::hash<void const*>{}(k.first) * 2 + k.second;
    }
  };

  TableauOptions opt_;
  std::vector<N> pool_;
  std::map<N, int> ids_;
  std::unordered_map<std::pair<void const*, bool>, std::pair<Formula, int>, PairHash> nnf_memo_;
  std::uint64_t nodes_ = 0;
};

}  // namespace detail

/// Satisfiability in K. On success the model is a tree whose root satisfies f.
inline TableauResult k_tableau_sat(Formula const& f, TableauOptions opt = {}) {
  return detail::KTableau(opt).run(f);
}

/// Validity in K: ¬f is unsatisfiable. On failure the model refutes f at world 0.
inline TableauResult k_tableau_valid(Formula const& f, TableauOptions opt = {}) {
  return k_tableau_sat(neg(f), opt);
}

namespace detail {

// Truth vectors over a subformula-closed list S that some pointed model
// realises. The successors of a world only matter through the values of the
// modal arguments, so a world is a letter assignment plus a set of projected
// successor types, and the reachable sets are built by adding one successor
// at a time.
class TypeOracle {
 public:
  explicit TypeOracle(std::vector<Formula> const& closure) : S_(closure) {
    for (std::size_t i = 0; i < S_.size(); ++i) pos_.emplace(S_[i], i);
  }

  std::set<std::vector<bool>> realizable() {
    std::vector<Formula> args;
    for (auto const& g : S_) {
      if (g.is_modal()) args.push_back(g.child());
    }
    std::vector<Formula> sub;
    {
      std::unordered_map<Formula, bool, FormulaHash> seen;
      for (auto const& a : args) {
        for (auto const& h : subformulas(a)) {
          if (seen.emplace(h, true).second) sub.push_back(h);
        }
      }
    }
    std::set<std::vector<bool>> succ_types;
    if (!args.empty()) succ_types = TypeOracle(sub).realizable();
    std::vector<std::size_t> arg_pos;
    for (auto const& a : args) {
      arg_pos.push_back(std::find(sub.begin(), sub.end(), a) - sub.begin());
    }
    // Successor summaries: for each modal subformula, (some succ has arg, all succs have arg).
    std::set<std::vector<bool>> summaries;
    std::vector<bool> empty(2 * args.size());
    for (std::size_t i = 0; i < args.size(); ++i) empty[2 * i + 1] = true;
    summaries.insert(empty);
    std::vector<std::vector<bool>> frontier{empty};
    while (!frontier.empty()) {
      auto cur = frontier.back();
      frontier.pop_back();
      for (auto const& t : succ_types) {
        auto next = cur;
        for (std::size_t i = 0; i < args.size(); ++i) {
          bool v = t[arg_pos[i]];
          next[2 * i] = next[2 * i] || v;
          next[2 * i + 1] = next[2 * i + 1] && v;
        }
        if (summaries.insert(next).second) frontier.push_back(next);
      }
    }
    std::vector<Var> letters;
    for (auto const& g : S_) {
      if (g.is_var()) letters.push_back(g.var());
    }
    std::set<std::vector<bool>> out;
    for (std::uint64_t L = 0; L < (std::uint64_t{1} << letters.size()); ++L) {
      for (auto const& sm : summaries) {
        std::vector<bool> val(S_.size());
        std::size_t mi = 0;
        for (std::size_t i = 0; i < S_.size(); ++i) {
          auto const& g = S_[i];
          switch (g.kind()) {
            case Formula::Kind::var: {
              auto li = std::find(letters.begin(), letters.end(), g.var()) - letters.begin();
              val[i] = (L >> li) & 1U;
              break;
            }
            case Formula::Kind::dia:
              val[i] = sm[2 * mi++];
              break;
            case Formula::Kind::box:
              val[i] = sm[2 * mi++ + 1];
              break;
            case Formula::Kind::op: {
              auto at = [&](std::size_t j) { return bool(val[pos_.at(g.args()[j])]); };
              if (g.is_op("top")) val[i] = true;
              else if (g.is_op("bot")) val[i] = false;
              else if (g.is_op("neg")) val[i] = !at(0);
              else if (g.is_op("and")) val[i] = at(0) && at(1);
              else val[i] = at(0) || at(1);
              break;
            }
          }
        }
        out.insert(std::move(val));
      }
    }
    return out;
  }

 private:
  std::vector<Formula> S_;
  std::unordered_map<Formula, std::size_t, FormulaHash> pos_;
};

}  // namespace detail

/// Satisfiability in K by type elimination over the subformulas of f.
inline bool k_oracle_sat(Formula const& f) {
  if (!is_classical(f)) throw SignatureError("the K oracle takes classical formulas");
  auto S = subformulas(f);
  auto types = detail::TypeOracle(S).realizable();
  for (auto const& t : types) {
    if (t.back()) return true;
  }
  return false;
}

inline bool k_oracle_valid(Formula const& f) { return !k_oracle_sat(neg(f)); }

}  // namespace mvml
