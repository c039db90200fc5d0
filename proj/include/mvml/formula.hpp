#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mvml/errors.hpp"

namespace mvml {

/// Index of an element in the carrier of a finite algebra.
using element = std::uint32_t;
/// Index of a world in a frame.
using world = std::uint32_t;

/// Propositional letter.
///
/// Letters live in disjoint namespaces so that fresh letters introduced by a
/// translation can never collide with user variables:
///   plain   p<index>            ordinary variable
///   star    p<index>@<tag>      "p_index takes value tag"
///   q       q<index>@<tag>      "subformula #index takes value tag"
///   term_x  x                   the free variable of a unary term
struct Var {
  enum class Kind : std::uint8_t { plain, star, q, term_x };

  Kind kind = Kind::plain;
  std::uint32_t index = 0;
  element tag = 0;

  static constexpr Var plain(std::uint32_t i) { return {Kind::plain, i, 0}; }
  static constexpr Var star(std::uint32_t i, element a) {
    return {Kind::star, i, a};
  }
  static constexpr Var q(std::uint32_t id, element a) { return {Kind::q, id, a}; }
  static constexpr Var x() { return {Kind::term_x, 0, 0}; }

  friend constexpr auto operator<=>(Var const&, Var const&) = default;
};

inline std::string to_string(Var v) {
  switch (v.kind) {
    case Var::Kind::plain:
      return "p" + std::to_string(v.index);
    case Var::Kind::star:
      return "p" + std::to_string(v.index) + "@" + std::to_string(v.tag);
    case Var::Kind::q:
      return "q" + std::to_string(v.index) + "@" + std::to_string(v.tag);
    case Var::Kind::term_x:
      return "x";
  }
  return "?";
}

namespace detail {
struct Node;
}

/// Immutable modal formula. Copies share structure, so a translation that
/// reuses a subformula many times produces a DAG rather than a tree.
class Formula {
 public:
  enum class Kind : std::uint8_t { var, op, dia, box };

  Formula() = delete;

  static Formula variable(Var v);
  static Formula op(std::string name, std::vector<Formula> args);
  static Formula dia(Formula f);
  static Formula box(Formula f);
  static Formula top() { return op("top", {}); }
  static Formula bot() { return op("bot", {}); }

  Kind kind() const noexcept;
  bool is_var() const noexcept { return kind() == Kind::var; }
  bool is_op() const noexcept { return kind() == Kind::op; }
  bool is_modal() const noexcept {
    return kind() == Kind::dia || kind() == Kind::box;
  }
  bool is_op(std::string_view name) const noexcept;

  Var var() const;
  std::string const& op_name() const;
  std::span<Formula const> args() const noexcept;
  Formula const& child() const;  // operand of dia/box

  std::size_t hash() const noexcept;
  unsigned rank() const noexcept;
  /// Number of nodes of the formula read as a tree (shared subterms are
  /// counted once per occurrence). Saturates at SIZE_MAX.
  std::size_t size() const noexcept;

  /// Address of the shared node; usable as a memoisation key while the
  /// formula is alive.
  void const* id() const noexcept { return node_.get(); }

  friend bool operator==(Formula const& a, Formula const& b);

 private:
  explicit Formula(std::shared_ptr<detail::Node const> n) : node_(std::move(n)) {}
  std::shared_ptr<detail::Node const> node_;
};

namespace detail {
struct Node {
  Formula::Kind kind;
  Var var;
  std::string op;
  std::vector<Formula> args;
  std::size_t hash = 0;
  unsigned rank = 0;
  std::size_t size = 1;
};

inline std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

inline std::size_t saturating_add(std::size_t a, std::size_t b) {
  return a > std::numeric_limits<std::size_t>::max() - b
             ? std::numeric_limits<std::size_t>::max()
             : a + b;
}
}  // namespace detail

inline Formula Formula::variable(Var v) {
  auto n = std::make_shared<detail::Node>();
  n->kind = Kind::var;
  n->var = v;
  std::size_t h = detail::hash_combine(0x51, static_cast<std::size_t>(v.kind));
  h = detail::hash_combine(h, v.index);
  n->hash = detail::hash_combine(h, v.tag);
  return Formula(std::move(n));
}

inline Formula Formula::op(std::string name, std::vector<Formula> args) {
  auto n = std::make_shared<detail::Node>();
  n->kind = Kind::op;
  std::size_t h = detail::hash_combine(0x93, std::hash<std::string>{}(name));
  for (auto const& a : args) {
    h = detail::hash_combine(h, a.hash());
    n->rank = std::max(n->rank, a.rank());
    n->size = detail::saturating_add(n->size, a.size());
  }
  n->op = std::move(name);
  n->args = std::move(args);
  n->hash = h;
  return Formula(std::move(n));
}

inline Formula Formula::dia(Formula f) {
  auto n = std::make_shared<detail::Node>();
  n->kind = Kind::dia;
  n->hash = detail::hash_combine(0xd1a, f.hash());
  n->rank = f.rank() + 1;
  n->size = detail::saturating_add(1, f.size());
  n->args.push_back(std::move(f));
  return Formula(std::move(n));
}

inline Formula Formula::box(Formula f) {
  auto n = std::make_shared<detail::Node>();
  n->kind = Kind::box;
  n->hash = detail::hash_combine(0xb0c, f.hash());
  n->rank = f.rank() + 1;
  n->size = detail::saturating_add(1, f.size());
  n->args.push_back(std::move(f));
  return Formula(std::move(n));
}

inline Formula::Kind Formula::kind() const noexcept { return node_->kind; }

inline bool Formula::is_op(std::string_view name) const noexcept {
  return node_->kind == Kind::op && node_->op == name;
}

inline Var Formula::var() const {
  if (node_->kind != Kind::var) {
    throw std::logic_error("Formula::var on a non-variable node");
  }
  return node_->var;
}

inline std::string const& Formula::op_name() const {
  if (node_->kind != Kind::op) {
    throw std::logic_error("Formula::op_name on a non-connective node");
  }
  return node_->op;
}

inline std::span<Formula const> Formula::args() const noexcept {
  return node_->args;
}

inline Formula const& Formula::child() const {
  if (!is_modal()) {
    throw std::logic_error("Formula::child on a non-modal node");
  }
  return node_->args.front();
}

inline std::size_t Formula::hash() const noexcept { return node_->hash; }
inline unsigned Formula::rank() const noexcept { return node_->rank; }
inline std::size_t Formula::size() const noexcept { return node_->size; }

inline bool operator==(Formula const& a, Formula const& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind()) return false;
  auto const& x = *a.node_;
  auto const& y = *b.node_;
  if (x.kind == Formula::Kind::var) return x.var == y.var;
  if (x.op != y.op || x.args.size() != y.args.size()) return false;
  for (std::size_t i = 0; i < x.args.size(); ++i) {
    if (!(x.args[i] == y.args[i])) return false;
  }
  return true;
}

struct FormulaHash {
  std::size_t operator()(Formula const& f) const noexcept { return f.hash(); }
};

// Convenience constructors for the connectives every signature shares.
inline Formula var(Var v) { return Formula::variable(v); }
inline Formula p(std::uint32_t i) { return Formula::variable(Var::plain(i)); }
inline Formula conj(Formula a, Formula b) {
  return Formula::op("and", {std::move(a), std::move(b)});
}
inline Formula disj(Formula a, Formula b) {
  return Formula::op("or", {std::move(a), std::move(b)});
}
inline Formula neg(Formula a) { return Formula::op("neg", {std::move(a)}); }
inline Formula dia(Formula a) { return Formula::dia(std::move(a)); }
inline Formula box(Formula a) { return Formula::box(std::move(a)); }

/// Classical material implication ¬a ∨ b.
inline Formula implies(Formula a, Formula b) {
  return disj(neg(std::move(a)), std::move(b));
}
/// Classical material equivalence (¬a ∨ b) ∧ (¬b ∨ a).
inline Formula iff(Formula const& a, Formula const& b) {
  return conj(implies(a, b), implies(b, a));
}

/// Left fold with ∧; the empty conjunction is `top`.
inline Formula big_and(std::vector<Formula> const& fs) {
  if (fs.empty()) return Formula::top();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
  return acc;
}

/// Left fold with ∨; the empty disjunction is `bot`.
inline Formula big_or(std::vector<Formula> const& fs) {
  if (fs.empty()) return Formula::bot();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
  return acc;
}

inline unsigned modal_rank(Formula const& f) { return f.rank(); }

/// □^m f.
inline Formula box_power(unsigned m, Formula f) {
  for (unsigned i = 0; i < m; ++i) f = Formula::box(std::move(f));
  return f;
}

/// Distinct subformulas in post-order of first occurrence (children before
/// parents, so the last entry is `f` itself).
inline std::vector<Formula> subformulas(Formula const& f) {
  std::vector<Formula> out;
  std::unordered_map<Formula, bool, FormulaHash> seen;
  std::function<void(Formula const&)> walk = [&](Formula const& g) {
    if (seen.contains(g)) return;
    for (auto const& a : g.args()) walk(a);
    seen.emplace(g, true);
    out.push_back(g);
  };
  walk(f);
  return out;
}

inline void collect_variables(Formula const& f, std::set<Var>& out) {
  std::unordered_map<void const*, bool> visited;
  std::function<void(Formula const&)> walk = [&](Formula const& g) {
    if (!visited.emplace(g.id(), true).second) return;
    if (g.is_var()) {
      out.insert(g.var());
      return;
    }
    for (auto const& a : g.args()) walk(a);
  };
  walk(f);
}

inline std::set<Var> variables(Formula const& f) {
  std::set<Var> out;
  collect_variables(f, out);
  return out;
}

inline std::set<Var> variables(std::span<Formula const> fs) {
  std::set<Var> out;
  for (auto const& f : fs) collect_variables(f, out);
  return out;
}

/// Replaces every occurrence of `v` by `g`.
inline Formula substitute(Formula const& f, Var v, Formula const& g) {
  std::unordered_map<void const*, Formula> memo;
  std::function<Formula(Formula const&)> go = [&](Formula const& h) -> Formula {
    if (auto it = memo.find(h.id()); it != memo.end()) return it->second;
    Formula r = h;
    switch (h.kind()) {
      case Formula::Kind::var:
        if (h.var() == v) r = g;
        break;
      case Formula::Kind::op: {
        std::vector<Formula> args;
        args.reserve(h.args().size());
        for (auto const& a : h.args()) args.push_back(go(a));
        r = Formula::op(h.op_name(), std::move(args));
        break;
      }
      case Formula::Kind::dia:
        r = Formula::dia(go(h.child()));
        break;
      case Formula::Kind::box:
        r = Formula::box(go(h.child()));
        break;
    }
    memo.emplace(h.id(), r);
    return r;
  };
  return go(f);
}

/// Number of distinct nodes of the DAG.
inline std::size_t dag_size(Formula const& f) {
  std::unordered_map<void const*, bool> visited;
  std::function<void(Formula const&)> walk = [&](Formula const& g) {
    if (!visited.emplace(g.id(), true).second) return;
    for (auto const& a : g.args()) walk(a);
  };
  walk(f);
  return visited.size();
}

/// Connective names and arities available to formulas.
///
/// `and`, `or` (binary) and the constants `top`, `bot` are always present.
class Signature {
 public:
  Signature() {
    ops_["and"] = 2;
    ops_["or"] = 2;
    ops_["top"] = 0;
    ops_["bot"] = 0;
  }

  void add(std::string const& name, unsigned arity) { ops_[name] = arity; }

  std::optional<unsigned> arity(std::string const& name) const {
    auto it = ops_.find(name);
    if (it == ops_.end()) return std::nullopt;
    return it->second;
  }

  bool has(std::string const& name, unsigned arity) const {
    auto a = this->arity(name);
    return a && *a == arity;
  }

  std::map<std::string, unsigned> const& ops() const { return ops_; }

  /// ∧, ∨, ¬ and the constants: the language of the two-element algebra.
  static Signature classical() {
    Signature s;
    s.add("neg", 1);
    return s;
  }

 private:
  std::map<std::string, unsigned> ops_;
};

/// Throws SignatureError if `f` uses a connective outside `sig` or with the
/// wrong number of arguments.
inline void check_signature(Formula const& f, Signature const& sig) {
  for (auto const& g : subformulas(f)) {
    if (!g.is_op()) continue;
    auto a = sig.arity(g.op_name());
    if (!a) throw SignatureError("unknown connective '" + g.op_name() + "'");
    if (*a != g.args().size()) {
      throw SignatureError("connective '" + g.op_name() + "' expects " +
                           std::to_string(*a) + " arguments, got " +
                           std::to_string(g.args().size()));
    }
  }
}

/// True iff `f` only uses ∧, ∨, ¬, the constants and the modalities.
inline bool is_classical(Formula const& f) {
  for (auto const& g : subformulas(f)) {
    if (g.is_op() && !(g.is_op("and") || g.is_op("or") || g.is_op("neg") ||
                       g.is_op("top") || g.is_op("bot"))) {
      return false;
    }
  }
  return true;
}

}  // namespace mvml
