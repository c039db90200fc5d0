#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mvml/algebra.hpp"
#include "mvml/classes.hpp"

namespace mvml {

/// Partition of a carrier into blocks, numbered in order of first occurrence
/// (element 0 is always in block 0).
class Partition {
 public:
  explicit Partition(std::vector<std::size_t> const& labels) {
    std::map<std::size_t, std::size_t> renumber;
    block_of_.reserve(labels.size());
    for (auto l : labels) {
      auto [it, fresh] = renumber.emplace(l, renumber.size());
      block_of_.push_back(it->second);
    }
    blocks_.resize(renumber.size());
    for (element a = 0; a < block_of_.size(); ++a) blocks_[block_of_[a]].push_back(a);
  }

  /// Every element in its own block.
  static Partition identity(std::size_t n) {
    std::vector<std::size_t> l(n);
    for (std::size_t i = 0; i < n; ++i) l[i] = i;
    return Partition(l);
  }

  std::size_t size() const noexcept { return block_of_.size(); }
  std::size_t block_count() const noexcept { return blocks_.size(); }
  std::size_t block_of(element a) const { return block_of_.at(a); }
  std::vector<std::vector<element>> const& blocks() const noexcept { return blocks_; }
  /// Least element index of the block.
  element representative(std::size_t block) const { return blocks_.at(block).front(); }
  bool same(element a, element b) const { return block_of_[a] == block_of_[b]; }

  friend bool operator==(Partition const&, Partition const&) = default;

 private:
  std::vector<std::size_t> block_of_;
  std::vector<std::vector<element>> blocks_;
};

/// Kernel of t: a ~ b iff t(a) = t(b).
inline Partition eq_kernel(LatticeAlgebra const& A, UnaryTerm const& t) {
  auto tab = term_table(A, t);
  return Partition(std::vector<std::size_t>(tab.begin(), tab.end()));
}

namespace detail {
inline bool compatible_table(Partition const& P, std::vector<element> const& neg) {
  for (element a = 0; a < P.size(); ++a) {
    if (!P.same(neg[a], neg[P.representative(P.block_of(a))])) return false;
  }
  return true;
}

inline bool compatible_lattice(LatticeAlgebra const& A, Partition const& P) {
  for (element a = 0; a < A.size(); ++a) {
    element ra = P.representative(P.block_of(a));
    for (element b = 0; b < A.size(); ++b) {
      element rb = P.representative(P.block_of(b));
      if (!P.same(A.meet(a, b), A.meet(ra, rb))) return false;
      if (!P.same(A.join(a, b), A.join(ra, rb))) return false;
    }
  }
  return true;
}
}  // namespace detail

/// True iff `P` is compatible with ∧, ∨ and the negation u, i.e. a
/// congruence of the reduct ⟨A, ∧, ∨, 0, 1, u⟩. Other operations of A are
/// deliberately ignored.
inline bool is_congruence(LatticeAlgebra const& A, Partition const& P, UnaryTerm const& u) {
  if (P.size() != A.size()) throw StructuralError("partition does not cover the carrier");
  return detail::compatible_lattice(A, P) && detail::compatible_table(P, term_table(A, u));
}

/// The reduct ⟨A, ∧, ∨, 0, 1, u⟩ divided by `P`. Blocks become elements in
/// block order; the induced negation is the operation `neg`.
inline LatticeAlgebra quotient(LatticeAlgebra const& A, Partition const& P,
                               UnaryTerm const& u) {
  if (!is_congruence(A, P, u)) {
    throw PreconditionError("partition is not a congruence of the reduct of " + A.name());
  }
  auto ng = term_table(A, u);
  std::size_t k = P.block_count();
  LatticeData d;
  d.name = A.name() + "/~";
  d.size = k;
  std::vector<element> meet(k * k), join(k * k);
  for (std::size_t i = 0; i < k; ++i) {
    std::string label = "{";
    for (std::size_t j = 0; j < P.blocks()[i].size(); ++j) {
      if (j) label += ",";
      label += A.label(P.blocks()[i][j]);
    }
    d.labels.push_back(label + "}");
    for (std::size_t j = 0; j < k; ++j) {
      element a = P.representative(i), b = P.representative(j);
      meet[i * k + j] = static_cast<element>(P.block_of(A.meet(a, b)));
      join[i * k + j] = static_cast<element>(P.block_of(A.join(a, b)));
    }
  }
  d.meet = meet;
  d.join = join;
  Operation n{1, {}};
  for (std::size_t i = 0; i < k; ++i) {
    n.table.push_back(static_cast<element>(P.block_of(ng[P.representative(i)])));
  }
  d.ops["neg"] = std::move(n);
  d.negation = UnaryTerm(neg(Formula::variable(Var::x())));
  return LatticeAlgebra(std::move(d));
}

/// A certified Boolean interpretation: t(1) = 1, Eq(t) is a congruence of the
/// reduct, and the quotient is a non-trivial Boolean algebra.
struct Interpretation {
  UnaryTerm term;
  Partition kernel;
  LatticeAlgebra quotient;
};

/// Checks the three conditions for `t` and returns the certificate.
inline std::optional<Interpretation> certify_interpretation(LatticeAlgebra const& A,
                                                            UnaryTerm const& u,
                                                            UnaryTerm const& t) {
  if (eval_term(A, t, A.top()) != A.top()) return std::nullopt;
  Partition P = eq_kernel(A, t);
  if (P.block_count() < 2 || !is_congruence(A, P, u)) return std::nullopt;
  LatticeAlgebra B = quotient(A, P, u);
  if (!class_check(B, AlgebraClass::boolean)) return std::nullopt;
  return Interpretation{t, std::move(P), std::move(B)};
}

struct InterpretationSearch {
  std::size_t max_size = 9;
  std::size_t candidate_budget = 20'000'000;
};

/// Smallest term t (by node count, ties broken by prefix serialisation)
/// interpreting a Boolean algebra in A with negation u. Terms are built from
/// x, the constants and every operation of A; subterms are deduplicated by
/// the function they compute. Returns nullopt if none has at most
/// `max_size` nodes.
inline std::optional<Interpretation> find_boolean_interpretation(
    LatticeAlgebra const& A, UnaryTerm const& u, InterpretationSearch opts = {}) {
  struct Rep {
    Formula term;
    std::string ser;
    std::vector<element> table;
  };
  using Table = std::vector<element>;
  struct TableHash {
    std::size_t operator()(Table const& t) const noexcept {
      std::size_t h = 0;
      for (auto e : t) h = detail::hash_combine(h, e);
      return h;
    }
  };

  std::size_t const n = A.size();
  std::vector<std::pair<std::string, unsigned>> ops;  // arity >= 1
  std::vector<Formula> leaves{Formula::variable(Var::x()), Formula::top(), Formula::bot()};
  ops.emplace_back("and", 2);
  ops.emplace_back("or", 2);
  for (auto const& [name, o] : A.ops()) {
    if (o.arity == 0) {
      leaves.push_back(Formula::op(name, {}));
    } else {
      ops.emplace_back(name, o.arity);
    }
  }

  std::unordered_map<Table, bool, TableHash> seen;
  std::vector<std::vector<Rep>> level(opts.max_size + 1);
  std::size_t candidates = 0;

  auto settle = [&](std::unordered_map<Table, Rep, TableHash>& fresh,
                    std::size_t s) -> std::optional<Interpretation> {
    std::vector<Rep> reps;
    for (auto& [tab, r] : fresh) reps.push_back(std::move(r));
    std::sort(reps.begin(), reps.end(),
              [](Rep const& a, Rep const& b) { return a.ser < b.ser; });
    for (auto const& r : reps) seen.emplace(r.table, true);
    level[s] = std::move(reps);
    for (auto const& r : level[s]) {
      if (auto cert = certify_interpretation(A, u, UnaryTerm(r.term))) return cert;
    }
    return std::nullopt;
  };

  auto offer = [&](std::unordered_map<Table, Rep, TableHash>& fresh, Formula term,
                   std::string ser) {
    if (++candidates > opts.candidate_budget) {
      throw ResourceError("interpretation search exceeded " +
                          std::to_string(opts.candidate_budget) + " candidate terms");
    }
    Table tab(n);
    for (element a = 0; a < n; ++a) tab[a] = detail::eval_closed(A, term, a);
    if (seen.contains(tab)) return;
    auto it = fresh.find(tab);
    if (it == fresh.end()) {
      fresh.emplace(tab, Rep{std::move(term), std::move(ser), tab});
    } else if (ser < it->second.ser) {
      it->second = Rep{std::move(term), std::move(ser), tab};
    }
  };

  for (std::size_t s = 1; s <= opts.max_size; ++s) {
    std::unordered_map<Table, Rep, TableHash> fresh;
    if (s == 1) {
      for (auto const& l : leaves) offer(fresh, l, serialize(l));
    } else {
      for (auto const& [name, arity] : ops) {
        // Distribute s-1 nodes over `arity` children, each of size >= 1.
        std::vector<std::size_t> sizes(arity, 1);
        std::size_t rest = s - 1;
        if (rest < arity) continue;
        std::function<void(std::size_t, std::size_t)> split = [&](std::size_t i,
                                                                   std::size_t left) {
          if (i + 1 == arity) {
            sizes[i] = left;
            std::vector<std::size_t> pick(arity, 0);
            // Cartesian product over the chosen levels.
            std::function<void(std::size_t)> choose = [&](std::size_t j) {
              if (j == arity) {
                std::vector<Formula> args;
                std::string ser = name + "(";
                for (std::size_t c = 0; c < arity; ++c) {
                  auto const& r = level[sizes[c]][pick[c]];
                  args.push_back(r.term);
                  if (c) ser += ',';
                  ser += r.ser;
                }
                ser += ')';
                offer(fresh, Formula::op(name, std::move(args)), std::move(ser));
                return;
              }
              for (std::size_t k = 0; k < level[sizes[j]].size(); ++k) {
                pick[j] = k;
                choose(j + 1);
              }
            };
            choose(0);
            return;
          }
          for (std::size_t sz = 1; sz + (arity - i - 1) <= left; ++sz) {
            sizes[i] = sz;
            split(i + 1, left - sz);
          }
        };
        split(0, rest);
      }
    }
    if (auto cert = settle(fresh, s)) return cert;
  }
  return std::nullopt;
}

}  // namespace mvml
