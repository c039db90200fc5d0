#pragma once

// Text syntax for formulas (grammar version 1).
//
//   formula := iff
//   iff     := imp [ ("<->" | "<=>" | "↔") iff ]
//   imp     := or  [ ("->"  | "=>"  | "→") imp ]          right associative
//   or      := and { ("|" | "∨") and }
//   and     := sum { ("&" | "∧") sum }
//   sum     := prod { ("+" | "⊕") prod }                  oplus
//   prod    := unary { ("*" | "⊙") unary }                conj
//   unary   := ("~" | "!" | "¬") unary
//            | ("dia" | "<>" | "◇") unary
//            | ("box" | "[]" | "□") unary
//            | atom
//   atom    := "top" | "bot" | letter | name "(" [formula {"," formula}] ")"
//            | "(" formula ")"
//   letter  := "p" digits [ "@" digits ] | "q" digits "@" digits | "x"
//
// Infix operators map onto connectives of the signature:
//   &  and      |  or      *  conj      +  oplus
//   ~  neg if the signature has it, otherwise  a -> bot
//   -> imp if the signature has it, otherwise  ~a | b
//   <-> (a -> b) & (b -> a), each arrow expanded as above
// "x" is only accepted when parsing unary terms.

#include <cctype>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mvml/errors.hpp"
#include "mvml/formula.hpp"

namespace mvml {

struct ParseOptions {
  bool allow_term_variable = false;
};

namespace detail {

enum class Tok {
  end,
  ident,
  number,
  at,
  lparen,
  rparen,
  comma,
  amp,
  bar,
  star,
  plus,
  tilde,
  arrow,
  darrow,
  diamond,
  boxsym,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      std::size_t l = line_, c = col_;
      if (pos_ >= src_.size()) {
        out.push_back({Tok::end, "", l, c});
        return out;
      }
      char ch = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
        std::size_t b = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                src_[pos_] == '_')) {
          advance(1);
        }
        out.push_back({Tok::ident, std::string(src_.substr(b, pos_ - b)), l, c});
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(ch))) {
        std::size_t b = pos_;
        while (pos_ < src_.size() &&
               std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          advance(1);
        }
        out.push_back({Tok::number, std::string(src_.substr(b, pos_ - b)), l, c});
        continue;
      }
      if (auto t = symbol()) {
        out.push_back({t->first, t->second, l, c});
        continue;
      }
      throw ParseError("unexpected character '" + std::string(1, ch) + "'", l, c);
    }
  }

 private:
  std::optional<std::pair<Tok, std::string>> symbol() {
    static constexpr std::pair<std::string_view, Tok> table[] = {
        {"<->", Tok::darrow}, {"<=>", Tok::darrow}, {"↔", Tok::darrow},
        {"->", Tok::arrow},   {"=>", Tok::arrow},   {"→", Tok::arrow},
        {"<>", Tok::diamond}, {"◇", Tok::diamond}, {"◊", Tok::diamond},
        {"[]", Tok::boxsym},  {"□", Tok::boxsym},
        {"&", Tok::amp},      {"∧", Tok::amp},
        {"|", Tok::bar},      {"∨", Tok::bar},
        {"*", Tok::star},     {"⊙", Tok::star},
        {"+", Tok::plus},     {"⊕", Tok::plus},
        {"~", Tok::tilde},    {"!", Tok::tilde},    {"¬", Tok::tilde},
        {"(", Tok::lparen},   {")", Tok::rparen},   {",", Tok::comma},
        {"@", Tok::at},
    };
    for (auto const& [s, t] : table) {
      if (src_.substr(pos_, s.size()) == s) {
        advance(s.size());
        return std::pair{t, std::string(s)};
      }
    }
    return std::nullopt;
  }

  void skip_space() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      advance(1);
    }
  }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i, ++pos_) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else if ((static_cast<unsigned char>(src_[pos_]) & 0xC0) != 0x80) {
        ++col_;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

inline std::uint32_t to_index(Token const& t) {
  try {
    return static_cast<std::uint32_t>(std::stoul(t.text));
  } catch (std::exception const&) {
    throw ParseError("number out of range '" + t.text + "'", t.line, t.column);
  }
}

class Parser {
 public:
  Parser(std::vector<Token> toks, Signature const& sig, ParseOptions opts)
      : toks_(std::move(toks)), sig_(sig), opts_(opts) {}

  Formula parse_all() {
    Formula f = parse_iff();
    if (peek().kind != Tok::end) error("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  Token const& peek() const { return toks_[pos_]; }
  Token const& take() { return toks_[pos_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  void expect(Tok k, char const* what) {
    if (!accept(k)) error(std::string("expected ") + what);
  }
  [[noreturn]] void error(std::string const& msg) const {
    throw ParseError(msg, peek().line, peek().column);
  }
  [[noreturn]] void error_at(Token const& t, std::string const& msg) const {
    throw ParseError(msg, t.line, t.column);
  }

  Formula negate(Formula a, Token const& at) {
    if (sig_.has("neg", 1)) return Formula::op("neg", {std::move(a)});
    if (sig_.has("imp", 2)) {
      return Formula::op("imp", {std::move(a), Formula::bot()});
    }
    error_at(at, "signature has neither 'neg' nor 'imp' for negation");
  }

  Formula arrow(Formula a, Formula b, Token const& at) {
    if (sig_.has("imp", 2)) return Formula::op("imp", {std::move(a), std::move(b)});
    if (sig_.has("neg", 1)) return disj(neg(std::move(a)), std::move(b));
    error_at(at, "signature has neither 'imp' nor 'neg' for implication");
  }

  Formula binary(std::string const& name, Formula a, Formula b, Token const& at) {
    if (!sig_.has(name, 2)) error_at(at, "unknown connective '" + name + "'");
    return Formula::op(name, {std::move(a), std::move(b)});
  }

  Formula parse_iff() {
    Formula a = parse_imp();
    if (peek().kind == Tok::darrow) {
      Token const& t = take();
      Formula b = parse_iff();
      return conj(arrow(a, b, t), arrow(b, a, t));
    }
    return a;
  }

  Formula parse_imp() {
    Formula a = parse_or();
    if (peek().kind == Tok::arrow) {
      Token const& t = take();
      Formula b = parse_imp();
      return arrow(std::move(a), std::move(b), t);
    }
    return a;
  }

  Formula parse_or() {
    Formula a = parse_and();
    while (peek().kind == Tok::bar) {
      Token const& t = take();
      a = binary("or", std::move(a), parse_and(), t);
    }
    return a;
  }

  Formula parse_and() {
    Formula a = parse_sum();
    while (peek().kind == Tok::amp) {
      Token const& t = take();
      a = binary("and", std::move(a), parse_sum(), t);
    }
    return a;
  }

  Formula parse_sum() {
    Formula a = parse_prod();
    while (peek().kind == Tok::plus) {
      Token const& t = take();
      a = binary("oplus", std::move(a), parse_prod(), t);
    }
    return a;
  }

  Formula parse_prod() {
    Formula a = parse_unary();
    while (peek().kind == Tok::star) {
      Token const& t = take();
      a = binary("conj", std::move(a), parse_unary(), t);
    }
    return a;
  }

  Formula parse_unary() {
    Token const& t = peek();
    if (t.kind == Tok::tilde) {
      take();
      return negate(parse_unary(), t);
    }
    if (t.kind == Tok::diamond || (t.kind == Tok::ident && t.text == "dia")) {
      take();
      return Formula::dia(parse_unary());
    }
    if (t.kind == Tok::boxsym || (t.kind == Tok::ident && t.text == "box")) {
      take();
      return Formula::box(parse_unary());
    }
    return parse_atom();
  }

  Formula parse_atom() {
    Token const& t = peek();
    if (accept(Tok::lparen)) {
      Formula f = parse_iff();
      expect(Tok::rparen, "')'");
      return f;
    }
    if (t.kind != Tok::ident) error("expected a formula");
    take();
    if (t.text == "top" || t.text == "bot") return Formula::op(t.text, {});
    if (t.text == "x" && opts_.allow_term_variable) {
      return Formula::variable(Var::x());
    }
    if (peek().kind == Tok::lparen) return parse_call(t);
    char lead = t.text.front();
    std::string_view digits = std::string_view(t.text).substr(1);
    if ((lead == 'p' || lead == 'q') && all_digits(digits)) {
      auto index = static_cast<std::uint32_t>(std::stoul(std::string(digits)));
      if (accept(Tok::at)) {
        if (peek().kind != Tok::number) error("expected a value tag after '@'");
        element tag = to_index(take());
        return Formula::variable(lead == 'p' ? Var::star(index, tag)
                                             : Var::q(index, tag));
      }
      if (lead == 'q') error_at(t, "q-letters need a value tag, e.g. q1@0");
      return Formula::variable(Var::plain(index));
    }
    error_at(t, "unknown identifier '" + t.text + "'");
  }

  Formula parse_call(Token const& name) {
    expect(Tok::lparen, "'('");
    std::vector<Formula> args;
    if (peek().kind != Tok::rparen) {
      args.push_back(parse_iff());
      while (accept(Tok::comma)) args.push_back(parse_iff());
    }
    expect(Tok::rparen, "')'");
    auto arity = sig_.arity(name.text);
    if (!arity) error_at(name, "unknown connective '" + name.text + "'");
    if (*arity != args.size()) {
      error_at(name, "connective '" + name.text + "' expects " +
                         std::to_string(*arity) + " arguments, got " +
                         std::to_string(args.size()));
    }
    return Formula::op(name.text, std::move(args));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Signature const& sig_;
  ParseOptions opts_;
};

// Printer precedence levels; higher binds tighter.
enum Prec : int { p_imp = 2, p_or = 3, p_and = 4, p_sum = 5, p_prod = 6, p_unary = 7, p_atom = 8 };

inline char const* infix_symbol(Formula const& f, int& prec, bool& right_assoc) {
  right_assoc = false;
  if (!f.is_op() || f.args().size() != 2) return nullptr;
  auto const& n = f.op_name();
  if (n == "and") return prec = p_and, " & ";
  if (n == "or") return prec = p_or, " | ";
  if (n == "conj") return prec = p_prod, " * ";
  if (n == "oplus") return prec = p_sum, " + ";
  if (n == "imp") return right_assoc = true, prec = p_imp, " -> ";
  return nullptr;
}

inline int precedence(Formula const& f) {
  int prec = p_atom;
  bool ra = false;
  if (infix_symbol(f, prec, ra)) return prec;
  if (f.is_modal() || (f.is_op("neg") && f.args().size() == 1)) return p_unary;
  return p_atom;
}

inline void print_to(std::ostream& os, Formula const& f) {
  auto wrapped = [&](Formula const& g, bool parens) {
    if (parens) os << '(';
    print_to(os, g);
    if (parens) os << ')';
  };
  switch (f.kind()) {
    case Formula::Kind::var:
      os << to_string(f.var());
      return;
    case Formula::Kind::dia:
    case Formula::Kind::box:
      os << (f.kind() == Formula::Kind::dia ? "dia " : "box ");
      wrapped(f.child(), precedence(f.child()) < p_unary);
      return;
    case Formula::Kind::op:
      break;
  }
  int prec = p_atom;
  bool right = false;
  if (char const* sym = infix_symbol(f, prec, right)) {
    int lp = precedence(f.args()[0]);
    int rp = precedence(f.args()[1]);
    wrapped(f.args()[0], right ? lp <= prec : lp < prec);
    os << sym;
    wrapped(f.args()[1], right ? rp < prec : rp <= prec);
    return;
  }
  if (f.is_op("neg") && f.args().size() == 1) {
    os << '~';
    wrapped(f.args()[0], precedence(f.args()[0]) < p_unary);
    return;
  }
  if ((f.is_op("top") || f.is_op("bot")) && f.args().empty()) {
    os << f.op_name();
    return;
  }
  os << f.op_name() << '(';
  for (std::size_t i = 0; i < f.args().size(); ++i) {
    if (i) os << ", ";
    print_to(os, f.args()[i]);
  }
  os << ')';
}

}  // namespace detail

/// Parses `text` over `sig`. Throws ParseError (with line/column) on lexical
/// or grammatical errors and on connectives missing from `sig`.
inline Formula parse(std::string_view text, Signature const& sig,
                     ParseOptions opts = {}) {
  detail::Lexer lex(text);
  detail::Parser parser(lex.run(), sig, opts);
  return parser.parse_all();
}

/// Canonical text; `parse(print(f), sig) == f` whenever `f` is over `sig`.
inline std::string print(Formula const& f) {
  std::ostringstream os;
  detail::print_to(os, f);
  return os.str();
}

inline std::ostream& operator<<(std::ostream& os, Formula const& f) {
  detail::print_to(os, f);
  return os;
}

}  // namespace mvml
