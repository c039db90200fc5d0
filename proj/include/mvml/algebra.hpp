#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mvml/errors.hpp"
#include "mvml/formula.hpp"
#include "mvml/term.hpp"

namespace mvml {

/// Finitary operation given by its full table, row-major over the arguments.
struct Operation {
  unsigned arity = 0;
  std::vector<element> table;

  element apply(std::span<element const> args, std::size_t n) const {
    std::size_t idx = 0;
    for (element a : args) idx = idx * n + a;
    return table[idx];
  }
};

/// Raw, possibly inconsistent description of a lattice algebra. Either the
/// order or at least one of the meet/join tables must be given; whatever is
/// missing is derived and whatever is given is cross-checked.
struct LatticeData {
  std::string name;
  std::size_t size = 0;
  std::vector<std::string> labels;            // optional, one per element
  std::optional<std::vector<bool>> leq;       // size*size, leq[a*size+b]
  std::optional<std::vector<element>> meet;   // size*size
  std::optional<std::vector<element>> join;   // size*size
  std::optional<element> bottom;
  std::optional<element> top;
  std::map<std::string, Operation> ops;
  std::optional<UnaryTerm> negation;          // the term u(x) used as ¬
};

struct Violation {
  std::string kind;  // reflexivity, antisymmetry, transitivity, glb, lub,
                     // meet-table, join-table, bottom, top
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }

  bool mentions(std::string_view kind) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](Violation const& v) { return v.kind == kind; });
  }

  std::string to_string() const {
    std::ostringstream os;
    for (auto const& v : violations) os << v.kind << ": " << v.detail << '\n';
    return os.str();
  }
};

/// The input describes a structure that is not a bounded lattice.
struct LatticeError : Error {
  explicit LatticeError(ValidationReport r)
      : Error("not a lattice:\n" + r.to_string()), report(std::move(r)) {}
  ValidationReport report;
};

namespace detail {

inline bool is_reserved_op(std::string const& name) {
  return name == "and" || name == "or" || name == "top" || name == "bot" ||
         name == "dia" || name == "box" || name == "x";
}

inline std::size_t power(std::size_t base, unsigned exp) {
  std::size_t r = 1;
  for (unsigned i = 0; i < exp; ++i) r *= base;
  return r;
}

/// Throws StructuralError listing every shape problem in `d`.
inline void check_structure(LatticeData const& d) {
  std::vector<std::string> errs;
  std::size_t n = d.size;
  if (n == 0) errs.push_back("carrier must be non-empty");
  if (!d.labels.empty() && d.labels.size() != n) {
    errs.push_back("expected " + std::to_string(n) + " labels, got " +
                   std::to_string(d.labels.size()));
  }
  if (d.leq && d.leq->size() != n * n) errs.push_back("order relation must be size x size");
  auto check_table = [&](std::vector<element> const& t, std::size_t expect,
                         std::string const& what) {
    if (t.size() != expect) {
      errs.push_back(what + " table has " + std::to_string(t.size()) +
                     " entries, expected " + std::to_string(expect));
      return;
    }
    for (element e : t) {
      if (e >= n) {
        errs.push_back(what + " table entry " + std::to_string(e) + " outside carrier");
        return;
      }
    }
  };
  if (d.meet) check_table(*d.meet, n * n, "meet");
  if (d.join) check_table(*d.join, n * n, "join");
  if (!d.leq && !d.meet && !d.join) {
    errs.push_back("one of order, meet or join must be given");
  }
  if (d.bottom && *d.bottom >= n) errs.push_back("bottom outside carrier");
  if (d.top && *d.top >= n) errs.push_back("top outside carrier");
  for (auto const& [name, op] : d.ops) {
    if (is_reserved_op(name)) errs.push_back("operation name '" + name + "' is reserved");
    check_table(op.table, power(n, op.arity), "operation '" + name + "'");
  }
  if (!errs.empty()) {
    std::string msg = "malformed algebra";
    for (auto const& e : errs) msg += "\n  " + e;
    throw StructuralError(msg);
  }
}

}  // namespace detail

/// Checks that `d` describes a bounded lattice: the order is a partial order,
/// every pair has a glb and lub, given tables agree with them and the given
/// bounds are the least/greatest elements. Throws StructuralError for shape
/// problems; semantic problems are returned in the report.
inline ValidationReport validate_lattice(LatticeData const& d) {
  detail::check_structure(d);
  ValidationReport rep;
  std::size_t const n = d.size;
  auto add = [&](std::string kind, std::string detail) {
    rep.violations.push_back({std::move(kind), std::move(detail)});
  };
  auto name = [&](element a) {
    return d.labels.empty() ? std::to_string(a) : d.labels[a];
  };

  std::vector<bool> leq(n * n, false);
  if (d.leq) {
    leq = *d.leq;
  } else if (d.meet) {
    for (element a = 0; a < n; ++a)
      for (element b = 0; b < n; ++b) leq[a * n + b] = (*d.meet)[a * n + b] == a;
  } else {
    for (element a = 0; a < n; ++a)
      for (element b = 0; b < n; ++b) leq[a * n + b] = (*d.join)[a * n + b] == b;
  }
  auto le = [&](element a, element b) { return static_cast<bool>(leq[a * n + b]); };

  for (element a = 0; a < n; ++a) {
    if (!le(a, a)) add("reflexivity", name(a) + " <= " + name(a) + " missing");
  }
  for (element a = 0; a < n; ++a) {
    for (element b = a + 1; b < n; ++b) {
      if (le(a, b) && le(b, a)) {
        add("antisymmetry", name(a) + " <= " + name(b) + " and " + name(b) +
                                " <= " + name(a));
      }
    }
  }
  for (element a = 0; a < n; ++a) {
    for (element b = 0; b < n; ++b) {
      if (!le(a, b)) continue;
      for (element c = 0; c < n; ++c) {
        if (le(b, c) && !le(a, c)) {
          add("transitivity", name(a) + " <= " + name(b) + " and " + name(b) +
                                  " <= " + name(c) + " but not " + name(a) +
                                  " <= " + name(c));
        }
      }
    }
  }
  if (!rep.ok()) return rep;

  // glb/lub by exhaustive search over the order.
  auto bound = [&](element a, element b, bool lower) -> std::optional<element> {
    std::optional<element> best;
    for (element c = 0; c < n; ++c) {
      bool is_bound = lower ? (le(c, a) && le(c, b)) : (le(a, c) && le(b, c));
      if (!is_bound) continue;
      bool extremal = true;
      for (element e = 0; e < n && extremal; ++e) {
        bool e_bound = lower ? (le(e, a) && le(e, b)) : (le(a, e) && le(b, e));
        if (e_bound && !(lower ? le(e, c) : le(c, e))) extremal = false;
      }
      if (extremal) best = c;
    }
    return best;
  };
  for (element a = 0; a < n; ++a) {
    for (element b = 0; b < n; ++b) {
      auto g = bound(a, b, true);
      auto l = bound(a, b, false);
      if (!g) add("glb", "no greatest lower bound for " + name(a) + ", " + name(b));
      if (!l) add("lub", "no least upper bound for " + name(a) + ", " + name(b));
      if (g && d.meet && (*d.meet)[a * n + b] != *g) {
        add("meet-table", "meet(" + name(a) + ", " + name(b) + ") is " +
                              name((*d.meet)[a * n + b]) + " but the glb is " +
                              name(*g));
      }
      if (l && d.join && (*d.join)[a * n + b] != *l) {
        add("join-table", "join(" + name(a) + ", " + name(b) + ") is " +
                              name((*d.join)[a * n + b]) + " but the lub is " +
                              name(*l));
      }
    }
  }

  auto extreme = [&](bool least) -> std::optional<element> {
    for (element c = 0; c < n; ++c) {
      bool ok = true;
      for (element e = 0; e < n && ok; ++e) ok = least ? le(c, e) : le(e, c);
      if (ok) return c;
    }
    return std::nullopt;
  };
  auto lo = extreme(true);
  auto hi = extreme(false);
  if (!lo) add("bottom", "no least element");
  if (!hi) add("top", "no greatest element");
  if (lo && d.bottom && *d.bottom != *lo) {
    add("bottom", "declared bottom " + name(*d.bottom) + " is not the least element " +
                      name(*lo));
  }
  if (hi && d.top && *d.top != *hi) {
    add("top", "declared top " + name(*d.top) + " is not the greatest element " +
                   name(*hi));
  }
  return rep;
}

/// Finite bounded lattice, possibly with extra operations. Instances are
/// always valid; the constructor throws LatticeError otherwise.
class LatticeAlgebra {
 public:
  explicit LatticeAlgebra(LatticeData d) {
    auto rep = validate_lattice(d);
    if (!rep.ok()) throw LatticeError(std::move(rep));
    n_ = d.size;
    name_ = d.name;
    labels_ = d.labels;
    if (labels_.empty()) {
      for (std::size_t i = 0; i < n_; ++i) labels_.push_back(std::to_string(i));
    }
    if (d.leq) {
      leq_ = *d.leq;
    } else {
      leq_.assign(n_ * n_, false);
      for (element a = 0; a < n_; ++a) {
        for (element b = 0; b < n_; ++b) {
          leq_[a * n_ + b] = d.meet ? (*d.meet)[a * n_ + b] == a
                                    : (*d.join)[a * n_ + b] == b;
        }
      }
    }
    meet_.resize(n_ * n_);
    join_.resize(n_ * n_);
    for (element a = 0; a < n_; ++a) {
      for (element b = 0; b < n_; ++b) {
        meet_[a * n_ + b] = extremal_bound(a, b, true);
        join_[a * n_ + b] = extremal_bound(a, b, false);
      }
    }
    for (element c = 0; c < n_; ++c) {
      bool least = true, greatest = true;
      for (element e = 0; e < n_; ++e) {
        least = least && leq(c, e);
        greatest = greatest && leq(e, c);
      }
      if (least) bottom_ = c;
      if (greatest) top_ = c;
    }
    ops_ = std::move(d.ops);
    negation_ = std::move(d.negation);
    if (negation_) check_signature(negation_->body(), signature());
  }

  std::string const& name() const noexcept { return name_; }
  std::size_t size() const noexcept { return n_; }
  std::string const& label(element a) const { return labels_.at(a); }
  std::vector<std::string> const& labels() const noexcept { return labels_; }

  /// Resolves an element given by label, or failing that by index.
  std::optional<element> find(std::string_view text) const {
    for (element a = 0; a < n_; ++a) {
      if (labels_[a] == text) return a;
    }
    if (detail::all_digits(text)) {
      auto v = std::stoul(std::string(text));
      if (v < n_) return static_cast<element>(v);
    }
    return std::nullopt;
  }

  bool leq(element a, element b) const { return leq_[a * n_ + b]; }
  element meet(element a, element b) const { return meet_[a * n_ + b]; }
  element join(element a, element b) const { return join_[a * n_ + b]; }
  element bottom() const noexcept { return bottom_; }
  element top() const noexcept { return top_; }

  bool has_op(std::string const& name, unsigned arity) const {
    auto it = ops_.find(name);
    return it != ops_.end() && it->second.arity == arity;
  }

  Operation const& op(std::string const& name) const {
    auto it = ops_.find(name);
    if (it == ops_.end()) {
      throw SignatureError("algebra " + name_ + " has no operation '" + name + "'");
    }
    return it->second;
  }

  std::map<std::string, Operation> const& ops() const noexcept { return ops_; }

  /// Applies any connective of the signature, including ∧, ∨ and the bounds.
  element apply(std::string const& name, std::span<element const> args) const {
    if (name == "and" && args.size() == 2) return meet(args[0], args[1]);
    if (name == "or" && args.size() == 2) return join(args[0], args[1]);
    if (name == "top" && args.empty()) return top_;
    if (name == "bot" && args.empty()) return bottom_;
    auto const& o = op(name);
    if (o.arity != args.size()) {
      throw SignatureError("operation '" + name + "' expects " +
                           std::to_string(o.arity) + " arguments");
    }
    return o.apply(args, n_);
  }

  Signature signature() const {
    Signature s;
    for (auto const& [name, o] : ops_) s.add(name, o.arity);
    return s;
  }

  std::optional<UnaryTerm> const& declared_negation() const noexcept {
    return negation_;
  }

  /// The term u(x) read as negation: the declared one, else x -> bot when the
  /// algebra has an implication, else the literal `neg` operation.
  UnaryTerm negation_term() const {
    if (negation_) return *negation_;
    if (has_op("imp", 2)) {
      return UnaryTerm(Formula::op("imp", {Formula::variable(Var::x()), Formula::bot()}));
    }
    if (has_op("neg", 1)) return UnaryTerm(neg(Formula::variable(Var::x())));
    throw SignatureError("algebra " + name_ + " has no negation term");
  }

  LatticeData data() const {
    LatticeData d;
    d.name = name_;
    d.size = n_;
    d.labels = labels_;
    d.leq = leq_;
    d.meet = meet_;
    d.join = join_;
    d.bottom = bottom_;
    d.top = top_;
    d.ops = ops_;
    d.negation = negation_;
    return d;
  }

 private:
  element extremal_bound(element a, element b, bool lower) const {
    for (element c = 0; c < n_; ++c) {
      bool is_bound = lower ? (leq(c, a) && leq(c, b)) : (leq(a, c) && leq(b, c));
      if (!is_bound) continue;
      bool ok = true;
      for (element e = 0; e < n_ && ok; ++e) {
        bool e_bound = lower ? (leq(e, a) && leq(e, b)) : (leq(a, e) && leq(b, e));
        if (e_bound) ok = lower ? leq(e, c) : leq(c, e);
      }
      if (ok) return c;
    }
    throw std::logic_error("validated lattice lacks a bound");
  }

  std::string name_;
  std::size_t n_ = 0;
  std::vector<std::string> labels_;
  std::vector<bool> leq_;
  std::vector<element> meet_;
  std::vector<element> join_;
  element bottom_ = 0;
  element top_ = 0;
  std::map<std::string, Operation> ops_;
  std::optional<UnaryTerm> negation_;
};

/// Least upper bound of `s`; the empty set has supremum bottom.
inline element sup_set(LatticeAlgebra const& alg, std::span<element const> s) {
  element acc = alg.bottom();
  for (element a : s) acc = alg.join(acc, a);
  return acc;
}

/// Greatest lower bound of `s`; the empty set has infimum top.
inline element inf_set(LatticeAlgebra const& alg, std::span<element const> s) {
  element acc = alg.top();
  for (element a : s) acc = alg.meet(acc, a);
  return acc;
}

namespace detail {
inline element eval_closed(LatticeAlgebra const& alg, Formula const& f, element x) {
  if (f.is_var()) {
    if (f.var().kind != Var::Kind::term_x) {
      throw SignatureError("unexpected variable " + to_string(f.var()) + " in term");
    }
    return x;
  }
  if (!f.is_op()) throw SignatureError("modalities are not allowed in terms");
  element buf[8];
  std::vector<element> big;
  std::span<element> args;
  if (f.args().size() <= 8) {
    args = std::span<element>(buf, f.args().size());
  } else {
    big.resize(f.args().size());
    args = big;
  }
  for (std::size_t i = 0; i < f.args().size(); ++i) {
    args[i] = eval_closed(alg, f.args()[i], x);
  }
  return alg.apply(f.op_name(), args);
}
}  // namespace detail

/// Value of t(a) in `alg`. Throws SignatureError on unknown operations.
inline element eval_term(LatticeAlgebra const& alg, UnaryTerm const& t, element a) {
  return detail::eval_closed(alg, t.body(), a);
}

/// The function a ↦ t(a) as a table.
inline std::vector<element> term_table(LatticeAlgebra const& alg, UnaryTerm const& t) {
  std::vector<element> out(alg.size());
  for (element a = 0; a < alg.size(); ++a) out[a] = eval_term(alg, t, a);
  return out;
}

}  // namespace mvml
