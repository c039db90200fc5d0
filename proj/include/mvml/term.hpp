#pragma once

#include <string>
#include <string_view>

#include "mvml/formula.hpp"
#include "mvml/parser.hpp"

namespace mvml {

/// Modality-free term in the single variable x, e.g. ~~x or x + x.
class UnaryTerm {
 public:
  /// The identity term x.
  UnaryTerm() : body_(Formula::variable(Var::x())) {}

  explicit UnaryTerm(Formula body) : body_(std::move(body)) {
    for (auto const& g : subformulas(body_)) {
      if (g.is_modal()) throw SignatureError("unary terms cannot contain modalities");
      if (g.is_var() && g.var().kind != Var::Kind::term_x) {
        throw SignatureError("unary terms may only use the variable x, found " +
                             to_string(g.var()));
      }
    }
  }

  static UnaryTerm parse(std::string_view text, Signature const& sig) {
    return UnaryTerm(mvml::parse(text, sig, {.allow_term_variable = true}));
  }

  Formula const& body() const noexcept { return body_; }
  std::size_t size() const noexcept { return body_.size(); }

  /// t(g): substitutes g for x.
  Formula apply(Formula const& g) const { return substitute(body_, Var::x(), g); }

  /// t(s(x)).
  UnaryTerm compose(UnaryTerm const& s) const { return UnaryTerm(apply(s.body_)); }

  friend bool operator==(UnaryTerm const& a, UnaryTerm const& b) {
    return a.body_ == b.body_;
  }

 private:
  Formula body_;
};

inline std::string print(UnaryTerm const& t) { return print(t.body()); }

/// Prefix serialisation used to order terms of equal size, e.g.
/// "imp(imp(x,bot),bot)". Prefix-free, so replacing a subterm by a
/// lexicographically smaller one never makes the whole term larger.
inline std::string serialize(Formula const& f) {
  if (f.is_var()) return to_string(f.var());
  std::string s;
  if (f.is_op()) {
    s = f.op_name();
  } else {
    s = f.kind() == Formula::Kind::dia ? "dia" : "box";
  }
  if (f.args().empty()) return s;
  s += '(';
  for (std::size_t i = 0; i < f.args().size(); ++i) {
    if (i) s += ',';
    s += serialize(f.args()[i]);
  }
  s += ')';
  return s;
}

inline std::string serialize(UnaryTerm const& t) { return serialize(t.body()); }

}  // namespace mvml
