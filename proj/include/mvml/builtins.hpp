#pragma once

#include <cctype>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>

#include "mvml/algebra.hpp"

namespace mvml {

namespace detail {
inline std::string fraction_label(std::size_t i, std::size_t d) {
  if (i == 0) return "0";
  if (i == d) return "1";
  auto g = std::gcd(i, d);
  return std::to_string(i / g) + "/" + std::to_string(d / g);
}

inline LatticeData chain_data(std::string name, std::size_t n) {
  LatticeData d;
  d.name = std::move(name);
  d.size = n;
  std::vector<bool> leq(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    d.labels.push_back(fraction_label(a, n - 1));
    for (std::size_t b = 0; b < n; ++b) leq[a * n + b] = a <= b;
  }
  d.leq = leq;
  return d;
}

template <class F>
Operation binary_op(std::size_t n, F f) {
  Operation o{2, std::vector<element>(n * n)};
  for (element a = 0; a < n; ++a)
    for (element b = 0; b < n; ++b) o.table[a * n + b] = static_cast<element>(f(a, b));
  return o;
}
}  // namespace detail

/// The Boolean algebra 2^k with ∧, ∨ and complement `neg`. Element i has
/// component j equal to bit j of i; labels list the components, e.g. "10".
inline LatticeAlgebra boolean_power(unsigned k) {
  if (k < 1 || k > 16) throw ParameterError("boolean_power needs 1 <= k <= 16");
  std::size_t n = std::size_t{1} << k;
  LatticeData d;
  d.name = k == 1 ? "2" : "2^" + std::to_string(k);
  d.size = n;
  std::vector<bool> leq(n * n);
  Operation ng{1, std::vector<element>(n)};
  for (std::size_t a = 0; a < n; ++a) {
    std::string label;
    for (unsigned j = 0; j < k; ++j) label += ((a >> j) & 1) ? '1' : '0';
    d.labels.push_back(label);
    ng.table[a] = static_cast<element>(~a & (n - 1));
    for (std::size_t b = 0; b < n; ++b) leq[a * n + b] = (a & b) == a;
  }
  d.leq = leq;
  d.ops["neg"] = ng;
  return LatticeAlgebra(std::move(d));
}

/// k·x = x ⊕ ... ⊕ x (k copies, left-nested).
inline UnaryTerm multiple_term(unsigned k) {
  Formula x = Formula::variable(Var::x());
  Formula acc = x;
  for (unsigned i = 1; i < k; ++i) acc = Formula::op("oplus", {acc, x});
  return UnaryTerm(acc);
}

/// Łukasiewicz chain Ł_n on {0, 1/(n-1), ..., 1} with ∧, ∨, ⊙ (conj),
/// → (imp) and ⊕ (oplus). Its negation term is the pseudocomplement
/// ((n-1)x) → 0, under which x ↦ (n-1)x interprets the Boolean skeleton.
inline LatticeAlgebra lukasiewicz_chain(std::size_t n) {
  if (n < 2) throw ParameterError("lukasiewicz_chain needs n >= 2");
  auto d = detail::chain_data("L" + std::to_string(n), n);
  std::size_t t = n - 1;
  d.ops["conj"] = detail::binary_op(n, [&](element a, element b) {
    return a + b > t ? a + b - t : 0;
  });
  d.ops["imp"] = detail::binary_op(n, [&](element a, element b) {
    return std::min<std::size_t>(t, t - a + b);
  });
  d.ops["oplus"] = detail::binary_op(n, [&](element a, element b) {
    return std::min<std::size_t>(t, a + b);
  });
  d.negation = UnaryTerm(Formula::op(
      "imp", {multiple_term(static_cast<unsigned>(t)).body(), Formula::bot()}));
  return LatticeAlgebra(std::move(d));
}

/// Gödel chain G_n with ∧, ∨ and the Heyting implication.
inline LatticeAlgebra godel_chain(std::size_t n) {
  if (n < 2) throw ParameterError("godel_chain needs n >= 2");
  auto d = detail::chain_data("G" + std::to_string(n), n);
  d.ops["imp"] = detail::binary_op(n, [&](element a, element b) {
    return a <= b ? n - 1 : b;
  });
  return LatticeAlgebra(std::move(d));
}

/// Three-element Kleene chain: ∧, ∨ and the involution ¬x = 1 - x. No
/// congruence of it has a Boolean quotient.
inline LatticeAlgebra kleene_chain() {
  auto d = detail::chain_data("K3", 3);
  d.ops["neg"] = Operation{1, {2, 1, 0}};
  return LatticeAlgebra(std::move(d));
}

/// Componentwise product. Keeps the operations both factors share with the
/// same arity; element (a, b) has index a*|B| + b.
inline LatticeAlgebra product(LatticeAlgebra const& A, LatticeAlgebra const& B) {
  std::size_t na = A.size(), nb = B.size(), n = na * nb;
  LatticeData d;
  d.name = A.name() + "*" + B.name();
  d.size = n;
  std::vector<bool> leq(n * n);
  for (std::size_t x = 0; x < n; ++x) {
    element xa = static_cast<element>(x / nb), xb = static_cast<element>(x % nb);
    d.labels.push_back("(" + A.label(xa) + "," + B.label(xb) + ")");
    for (std::size_t y = 0; y < n; ++y) {
      element ya = static_cast<element>(y / nb), yb = static_cast<element>(y % nb);
      leq[x * n + y] = A.leq(xa, ya) && B.leq(xb, yb);
    }
  }
  d.leq = leq;
  for (auto const& [name, oa] : A.ops()) {
    if (!B.has_op(name, oa.arity)) continue;
    auto const& ob = B.op(name);
    Operation o{oa.arity, std::vector<element>(detail::power(n, oa.arity))};
    std::vector<element> args(oa.arity), aa(oa.arity), bb(oa.arity);
    for (std::size_t idx = 0; idx < o.table.size(); ++idx) {
      std::size_t r = idx;
      for (unsigned i = oa.arity; i-- > 0;) {
        args[i] = static_cast<element>(r % n);
        r /= n;
        aa[i] = static_cast<element>(args[i] / nb);
        bb[i] = static_cast<element>(args[i] % nb);
      }
      o.table[idx] = static_cast<element>(oa.apply(aa, na) * nb + ob.apply(bb, nb));
    }
    d.ops[name] = std::move(o);
  }
  auto const& ua = A.declared_negation();
  auto const& ub = B.declared_negation();
  if (ua && ub && *ua == *ub) d.negation = ua;
  return LatticeAlgebra(std::move(d));
}

/// Resolves a builtin algebra name:
///   2, 2^k         Boolean algebras
///   l<n>, L<n>     Łukasiewicz chains
///   g<n>, G<n>, godel<n>
///   k3, kleene3    Kleene chain
///   A*B            product of two names
/// Returns nullopt for names that are not builtins.
inline std::optional<LatticeAlgebra> builtin(std::string_view name) {
  if (auto star = name.find('*'); star != std::string_view::npos) {
    auto a = builtin(name.substr(0, star));
    auto b = builtin(name.substr(star + 1));
    if (!a || !b) return std::nullopt;
    return product(*a, *b);
  }
  auto number_after = [&](std::string_view prefix) -> std::optional<std::size_t> {
    if (name.size() <= prefix.size() || name.substr(0, prefix.size()) != prefix)
      return std::nullopt;
    auto rest = name.substr(prefix.size());
    if (!detail::all_digits(rest) || rest.size() > 6) return std::nullopt;
    return std::stoul(std::string(rest));
  };
  if (name == "2") return boolean_power(1);
  if (auto k = number_after("2^")) return boolean_power(static_cast<unsigned>(*k));
  if (name == "k3" || name == "kleene3") return kleene_chain();
  for (auto prefix : {"godel", "g", "G"}) {
    if (auto n = number_after(prefix)) return godel_chain(*n);
  }
  for (auto prefix : {"l", "L"}) {
    if (auto n = number_after(prefix)) return lukasiewicz_chain(*n);
  }
  return std::nullopt;
}

}  // namespace mvml
