#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mvml/algebra.hpp"

namespace mvml {

enum class AlgebraClass { boolean, pseudocomplemented, stone, heyting, mv };

inline std::string_view to_string(AlgebraClass c) {
  switch (c) {
    case AlgebraClass::boolean: return "boolean";
    case AlgebraClass::pseudocomplemented: return "pseudocomplemented";
    case AlgebraClass::stone: return "stone";
    case AlgebraClass::heyting: return "heyting";
    case AlgebraClass::mv: return "mv";
  }
  return "?";
}

inline std::optional<AlgebraClass> parse_algebra_class(std::string_view s) {
  for (auto c : {AlgebraClass::boolean, AlgebraClass::pseudocomplemented,
                 AlgebraClass::stone, AlgebraClass::heyting, AlgebraClass::mv}) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

/// Outcome of a class membership test. On failure `condition` names the
/// violated law and `witness` holds the offending elements.
struct ClassCheck {
  bool holds = true;
  std::string condition;
  std::vector<element> witness;

  explicit operator bool() const noexcept { return holds; }
};

namespace detail {

inline ClassCheck fail(std::string cond, std::vector<element> w) {
  return {false, std::move(cond), std::move(w)};
}

inline std::optional<ClassCheck> check_distributive(LatticeAlgebra const& A) {
  std::size_t n = A.size();
  for (element a = 0; a < n; ++a)
    for (element b = 0; b < n; ++b)
      for (element c = 0; c < n; ++c)
        if (A.meet(a, A.join(b, c)) != A.join(A.meet(a, b), A.meet(a, c)))
          return fail("distributivity", {a, b, c});
  return std::nullopt;
}

// f(a) must be max{ c | pred(c) }.
template <class Pred>
bool is_max_of(LatticeAlgebra const& A, element candidate, Pred pred) {
  if (!pred(candidate)) return false;
  for (element c = 0; c < A.size(); ++c) {
    if (pred(c) && !A.leq(c, candidate)) return false;
  }
  return true;
}

inline std::optional<ClassCheck> check_pseudocomplement(LatticeAlgebra const& A,
                                                        std::vector<element> const& ng) {
  for (element a = 0; a < A.size(); ++a) {
    if (!is_max_of(A, ng[a], [&](element b) { return A.meet(a, b) == A.bottom(); }))
      return fail("pseudocomplement", {a});
  }
  return std::nullopt;
}

inline std::optional<ClassCheck> check_residuum(LatticeAlgebra const& A,
                                                std::string const& product) {
  auto const& imp = A.op("imp");
  std::size_t n = A.size();
  for (element a = 0; a < n; ++a) {
    for (element b = 0; b < n; ++b) {
      element r = imp.table[a * n + b];
      bool ok = is_max_of(A, r, [&](element c) {
        element ac = product == "and" ? A.meet(a, c) : A.op(product).table[a * n + c];
        return A.leq(ac, b);
      });
      if (!ok) return fail("residuation", {a, b});
    }
  }
  return std::nullopt;
}

inline void require(LatticeAlgebra const& A, std::string const& op, unsigned arity,
                    AlgebraClass c) {
  if (!A.has_op(op, arity)) {
    throw SignatureError("class " + std::string(to_string(c)) + " needs operation '" +
                         op + "' of arity " + std::to_string(arity) +
                         ", absent from " + A.name());
  }
}

}  // namespace detail

/// Exhaustively checks the defining laws of `cls` on `A`. Classes built on
/// negation use the algebra's negation term; Heyting needs `imp`, MV needs
/// `conj` and `imp`. Throws SignatureError when a needed operation is absent.
inline ClassCheck class_check(LatticeAlgebra const& A, AlgebraClass cls) {
  using detail::fail;
  std::size_t const n = A.size();
  switch (cls) {
    case AlgebraClass::boolean: {
      auto ng = term_table(A, A.negation_term());
      if (auto r = detail::check_distributive(A)) return *r;
      for (element a = 0; a < n; ++a) {
        if (A.join(a, ng[a]) != A.top()) return fail("a | ~a = top", {a});
        if (A.meet(a, ng[a]) != A.bottom()) return fail("a & ~a = bot", {a});
      }
      return {};
    }
    case AlgebraClass::pseudocomplemented: {
      auto ng = term_table(A, A.negation_term());
      if (auto r = detail::check_pseudocomplement(A, ng)) return *r;
      return {};
    }
    case AlgebraClass::stone: {
      auto ng = term_table(A, A.negation_term());
      if (auto r = detail::check_pseudocomplement(A, ng)) return *r;
      if (auto r = detail::check_distributive(A)) return *r;
      for (element a = 0; a < n; ++a) {
        if (A.join(ng[a], ng[ng[a]]) != A.top()) return fail("~a | ~~a = top", {a});
      }
      return {};
    }
    case AlgebraClass::heyting: {
      detail::require(A, "imp", 2, cls);
      if (auto r = detail::check_residuum(A, "and")) return *r;
      return {};
    }
    case AlgebraClass::mv: {
      detail::require(A, "conj", 2, cls);
      detail::require(A, "imp", 2, cls);
      auto const& m = A.op("conj").table;
      auto const& imp = A.op("imp").table;
      for (element a = 0; a < n; ++a) {
        if (m[a * n + A.top()] != a || m[A.top() * n + a] != a)
          return fail("conj has top as neutral element", {a});
        for (element b = 0; b < n; ++b) {
          if (m[a * n + b] != m[b * n + a]) return fail("conj commutative", {a, b});
          for (element c = 0; c < n; ++c) {
            if (A.leq(a, b) && !A.leq(m[a * n + c], m[b * n + c]))
              return fail("conj monotone", {a, b, c});
          }
        }
      }
      if (auto r = detail::check_residuum(A, "conj")) return *r;
      for (element a = 0; a < n; ++a) {
        for (element b = 0; b < n; ++b) {
          if (A.join(imp[a * n + b], imp[b * n + a]) != A.top())
            return fail("prelinearity", {a, b});
          if (A.join(a, b) != imp[imp[a * n + b] * n + b])
            return fail("a | b = (a -> b) -> b", {a, b});
        }
      }
      return {};
    }
  }
  return {};
}

}  // namespace mvml
