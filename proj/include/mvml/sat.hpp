#pragma once

// Small CDCL SAT solver: two watched literals, first-UIP learning, VSIDS
// decisions with phase saving and Luby restarts. Sized for the groundings of
// modal formulas on desk-scale frames; learnt clauses are never deleted.

#include <cstdint>
#include <iterator>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

namespace mvml::sat {

/// Literal: 2*var for the positive literal, 2*var+1 for the negative one.
struct Lit {
  std::uint32_t code = 0;

  static constexpr Lit pos(std::uint32_t v) { return {v << 1}; }
  static constexpr Lit neg(std::uint32_t v) { return {(v << 1) | 1U}; }
  constexpr std::uint32_t var() const { return code >> 1; }
  constexpr bool negative() const { return code & 1U; }
  constexpr Lit operator~() const { return {code ^ 1U}; }
  friend constexpr bool operator==(Lit, Lit) = default;
};

enum class Result { sat, unsat, unknown };

class Solver {
 public:
  std::uint32_t new_var() {
    auto v = static_cast<std::uint32_t>(assigns_.size());
    assigns_.push_back(-1);
    level_.push_back(0);
    reason_.push_back(-1);
    activity_.push_back(0.0);
    phase_.push_back(false);
    seen_.push_back(false);
    watches_.emplace_back();
    watches_.emplace_back();
    order_.emplace(0.0, v);
    return v;
  }

  std::size_t var_count() const noexcept { return assigns_.size(); }
  std::size_t clause_count() const noexcept { return clauses_.size(); }

  /// Adds a clause at decision level 0. Returns false once the formula is
  /// known to be unsatisfiable.
  bool add_clause(std::vector<Lit> c) {
    if (!ok_) return false;
    std::vector<Lit> kept;
    for (Lit l : c) {
      int v = value(l);
      if (v == 1) return true;
      if (v == 0) continue;
      bool dup = false;
      for (Lit k : kept) {
        if (k == ~l) return true;
        if (k == l) dup = true;
      }
      if (!dup) kept.push_back(l);
    }
    if (kept.empty()) return ok_ = false;
    if (kept.size() == 1) {
      enqueue(kept[0], -1);
      if (propagate() >= 0) ok_ = false;
      return ok_;
    }
    attach(std::move(kept));
    return true;
  }

  /// Decides satisfiability. `conflict_budget` of 0 means unlimited.
  Result solve(std::uint64_t conflict_budget = 0) {
    if (!ok_) return Result::unsat;
    std::uint64_t conflicts = 0;
    std::uint64_t restart_index = 0;
    std::uint64_t next_restart = 64 * luby(restart_index);
    std::vector<Lit> learnt;
    while (true) {
      int confl = propagate();
      if (confl >= 0) {
        ++conflicts;
        if (decision_level() == 0) return ok_ = false, Result::unsat;
        int back = analyze(confl, learnt);
        cancel_until(back);
        if (learnt.size() == 1) {
          enqueue(learnt[0], -1);
        } else {
          int idx = attach(learnt);
          enqueue(learnt[0], idx);
        }
        decay();
        if (conflict_budget && conflicts >= conflict_budget) {
          cancel_until(0);
          return Result::unknown;
        }
        if (conflicts >= next_restart) {
          cancel_until(0);
          next_restart = conflicts + 64 * luby(++restart_index);
        }
        continue;
      }
      auto next = pick_branch();
      if (!next) {
        model_.assign(assigns_.size(), false);
        for (std::size_t v = 0; v < assigns_.size(); ++v) model_[v] = assigns_[v] == 1;
        cancel_until(0);
        return Result::sat;
      }
      trail_lim_.push_back(trail_.size());
      enqueue(*next, -1);
    }
  }

  /// Value of `v` in the last satisfying assignment.
  bool model_value(std::uint32_t v) const { return model_.at(v); }
  bool model_value(Lit l) const { return model_.at(l.var()) != l.negative(); }

 private:
  struct Clause {
    std::vector<Lit> lits;
  };

  int value(Lit l) const {
    int a = assigns_[l.var()];
    if (a < 0) return -1;
    return l.negative() ? 1 - a : a;
  }

  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  int attach(std::vector<Lit> lits) {
    int idx = static_cast<int>(clauses_.size());
    watches_[lits[0].code].push_back(idx);
    watches_[lits[1].code].push_back(idx);
    clauses_.push_back({std::move(lits)});
    return idx;
  }

  void enqueue(Lit l, int reason) {
    std::uint32_t v = l.var();
    assigns_[v] = l.negative() ? 0 : 1;
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(l);
  }

  // Returns the index of a conflicting clause, or -1.
  int propagate() {
    while (qhead_ < trail_.size()) {
      Lit p = trail_[qhead_++];
      Lit falsified = ~p;
      auto& ws = watches_[falsified.code];
      std::size_t i = 0, j = 0;
      int conflict = -1;
      while (i < ws.size()) {
        int ci = ws[i++];
        auto& c = clauses_[ci].lits;
        if (c[0] == falsified) std::swap(c[0], c[1]);
        if (value(c[0]) == 1) {
          ws[j++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (value(c[k]) != 0) {
            std::swap(c[1], c[k]);
            watches_[c[1].code].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = ci;
        if (value(c[0]) == 0) {
          conflict = ci;
          while (i < ws.size()) ws[j++] = ws[i++];
        } else {
          enqueue(c[0], ci);
        }
      }
      ws.resize(j);
      if (conflict >= 0) return conflict;
    }
    return -1;
  }

  int analyze(int confl, std::vector<Lit>& out) {
    out.assign(1, Lit{});
    int counter = 0;
    Lit p{};
    bool have_p = false;
    std::size_t index = trail_.size();
    do {
      auto const& c = clauses_[confl].lits;
      for (std::size_t k = have_p ? 1 : 0; k < c.size(); ++k) {
        Lit q = c[k];
        std::uint32_t v = q.var();
        if (seen_[v] || level_[v] == 0) continue;
        seen_[v] = true;
        bump(v);
        if (level_[v] >= decision_level()) {
          ++counter;
        } else {
          out.push_back(q);
        }
      }
      while (!seen_[trail_[--index].var()]) {
      }
      p = trail_[index];
      have_p = true;
      confl = reason_[p.var()];
      seen_[p.var()] = false;
      --counter;
      // Reason clauses keep their implied literal at index 0.
    } while (counter > 0);
    out[0] = ~p;
    for (std::size_t k = 1; k < out.size(); ++k) seen_[out[k].var()] = false;

    int back = 0;
    if (out.size() > 1) {
      std::size_t best = 1;
      for (std::size_t k = 2; k < out.size(); ++k) {
        if (level_[out[k].var()] > level_[out[best].var()]) best = k;
      }
      std::swap(out[1], out[best]);
      back = level_[out[1].var()];
    }
    return back;
  }

  void cancel_until(int lvl) {
    if (decision_level() <= lvl) return;
    for (std::size_t i = trail_.size(); i-- > trail_lim_[lvl];) {
      std::uint32_t v = trail_[i].var();
      phase_[v] = assigns_[v] == 1;
      assigns_[v] = -1;
      reason_[v] = -1;
      order_.emplace(activity_[v], v);
    }
    trail_.resize(trail_lim_[lvl]);
    trail_lim_.resize(lvl);
    qhead_ = trail_.size();
  }

  std::optional<Lit> pick_branch() {
    while (!order_.empty()) {
      auto it = std::prev(order_.end());
      auto [act, v] = *it;
      order_.erase(it);
      if (assigns_[v] < 0 && act == activity_[v]) {
        return phase_[v] ? Lit::pos(v) : Lit::neg(v);
      }
    }
    for (std::uint32_t v = 0; v < assigns_.size(); ++v) {
      if (assigns_[v] < 0) return phase_[v] ? Lit::pos(v) : Lit::neg(v);
    }
    return std::nullopt;
  }

  void bump(std::uint32_t v) {
    activity_[v] += inc_;
    if (activity_[v] > 1e100) {
      for (auto& a : activity_) a *= 1e-100;
      inc_ *= 1e-100;
      order_.clear();
      for (std::uint32_t u = 0; u < assigns_.size(); ++u) {
        if (assigns_[u] < 0) order_.emplace(activity_[u], u);
      }
      return;
    }
    if (assigns_[v] < 0) order_.emplace(activity_[v], v);
  }

  void decay() { inc_ /= 0.95; }

  static std::uint64_t luby(std::uint64_t i) {
    std::uint64_t size = 1, seq = 0;
    while (size < i + 1) {
      ++seq;
      size = 2 * size + 1;
    }
    while (size - 1 != i) {
      size = (size - 1) >> 1;
      --seq;
      i = i % size;
    }
    return std::uint64_t{1} << seq;
  }

  bool ok_ = true;
  std::vector<Clause> clauses_;
  std::vector<std::vector<int>> watches_;
  std::vector<int> assigns_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<double> activity_;
  std::vector<bool> phase_;
  std::vector<bool> seen_;
  std::vector<Lit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
  std::set<std::pair<double, std::uint32_t>> order_;
  double inc_ = 1.0;
  std::vector<bool> model_;
};

}  // namespace mvml::sat
