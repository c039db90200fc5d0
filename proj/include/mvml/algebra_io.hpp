#pragma once

// Algebra files. Line oriented; '#' starts a comment.
//
//   algebra <name>
//   size <n>
//   labels <l_0> ... <l_{n-1}>           optional, defaults to 0..n-1
//   order                                pairs "a b" meaning a <= b;
//     <a> <b>                            reflexive pairs are implied
//   end
//   meet | join                          n rows of n entries
//     ...
//   end
//   bottom <e>                           optional, checked
//   top <e>                              optional, checked
//   op <name> <arity>                    n^arity entries, row-major
//     ...
//   end
//   negation <term in x>                 optional, e.g.  negation x -> bot
//
// Elements are written as labels or as indices. At least one of order, meet
// and join must be present; the rest is derived and cross-checked.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mvml/algebra.hpp"
#include "mvml/builtins.hpp"

namespace mvml {

namespace detail {

struct LineReader {
  std::istream& in;
  std::size_t line_no = 0;

  /// Next non-empty line split into tokens; false at end of input.
  bool next(std::vector<std::string>& toks, std::string& raw) {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
      std::istringstream ss(line);
      toks.clear();
      for (std::string t; ss >> t;) toks.push_back(t);
      if (!toks.empty()) {
        raw = line;
        return true;
      }
    }
    return false;
  }

  [[noreturn]] void fail(std::string const& msg) const {
    throw ParseError(msg, line_no, 1);
  }
};

}  // namespace detail

inline LatticeData read_algebra_data(std::istream& in) {
  detail::LineReader r{in};
  LatticeData d;
  std::vector<std::string> toks;
  std::string raw;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> pending_order;
  struct PendingTable {
    std::string what;
    unsigned arity;
    std::size_t line;
    std::vector<std::string> entries;
  };
  std::vector<PendingTable> tables;
  std::optional<std::pair<std::size_t, std::string>> negation_text;
  std::optional<std::pair<std::size_t, std::string>> bottom_text, top_text;

  auto read_block = [&](std::vector<std::string>& entries) {
    while (true) {
      if (!r.next(toks, raw)) r.fail("unterminated block, expected 'end'");
      if (toks.size() == 1 && toks[0] == "end") return;
      entries.insert(entries.end(), toks.begin(), toks.end());
    }
  };

  while (r.next(toks, raw)) {
    auto const& key = toks[0];
    if (key == "algebra") {
      if (toks.size() != 2) r.fail("expected: algebra <name>");
      d.name = toks[1];
    } else if (key == "size") {
      if (toks.size() != 2 || !detail::all_digits(toks[1])) r.fail("expected: size <n>");
      d.size = std::stoul(toks[1]);
    } else if (key == "labels") {
      d.labels.assign(toks.begin() + 1, toks.end());
    } else if (key == "order") {
      while (true) {
        if (!r.next(toks, raw)) r.fail("unterminated order block");
        if (toks.size() == 1 && toks[0] == "end") break;
        if (toks.size() != 2) r.fail("order entries are pairs 'a b'");
        pending_order.emplace_back(r.line_no, toks);
      }
    } else if (key == "meet" || key == "join") {
      PendingTable t{key, 2, r.line_no, {}};
      read_block(t.entries);
      tables.push_back(std::move(t));
    } else if (key == "op") {
      if (toks.size() != 3 || !detail::all_digits(toks[2])) {
        r.fail("expected: op <name> <arity>");
      }
      PendingTable t{toks[1], static_cast<unsigned>(std::stoul(toks[2])), r.line_no, {}};
      read_block(t.entries);
      tables.push_back(std::move(t));
    } else if (key == "bottom" || key == "top") {
      if (toks.size() != 2) r.fail("expected: " + key + " <element>");
      (key == "bottom" ? bottom_text : top_text) = std::pair{r.line_no, toks[1]};
    } else if (key == "negation") {
      auto pos = raw.find("negation");
      negation_text = std::pair{r.line_no, raw.substr(pos + 8)};
    } else {
      r.fail("unknown directive '" + key + "'");
    }
  }
  if (d.size == 0) throw ParseError("missing 'size'", r.line_no, 1);
  if (!d.labels.empty() && d.labels.size() != d.size) {
    throw ParseError("labels must list exactly " + std::to_string(d.size) + " elements",
                     r.line_no, 1);
  }

  auto resolve = [&](std::string const& tok, std::size_t line) -> element {
    for (element a = 0; a < d.labels.size(); ++a) {
      if (d.labels[a] == tok) return a;
    }
    if (detail::all_digits(tok) && std::stoul(tok) < d.size) {
      return static_cast<element>(std::stoul(tok));
    }
    throw ParseError("unknown element '" + tok + "'", line, 1);
  };

  if (!pending_order.empty()) {
    std::vector<bool> leq(d.size * d.size, false);
    for (std::size_t a = 0; a < d.size; ++a) leq[a * d.size + a] = true;
    for (auto const& [line, pair] : pending_order) {
      leq[resolve(pair[0], line) * d.size + resolve(pair[1], line)] = true;
    }
    d.leq = leq;
  }
  for (auto const& t : tables) {
    std::vector<element> tab;
    tab.reserve(t.entries.size());
    for (auto const& e : t.entries) tab.push_back(resolve(e, t.line));
    if (t.what == "meet") {
      d.meet = tab;
    } else if (t.what == "join") {
      d.join = tab;
    } else {
      d.ops[t.what] = Operation{t.arity, std::move(tab)};
    }
  }
  if (bottom_text) d.bottom = resolve(bottom_text->second, bottom_text->first);
  if (top_text) d.top = resolve(top_text->second, top_text->first);
  if (negation_text) {
    Signature sig;
    for (auto const& [name, o] : d.ops) sig.add(name, o.arity);
    try {
      d.negation = UnaryTerm::parse(negation_text->second, sig);
    } catch (ParseError const& e) {
      throw ParseError(std::string("in negation term: ") + e.what(), negation_text->first,
                       e.column());
    }
  }
  return d;
}

/// Parses and validates; throws ParseError, StructuralError or LatticeError.
inline LatticeAlgebra read_algebra(std::istream& in) {
  return LatticeAlgebra(read_algebra_data(in));
}

inline void write_algebra(std::ostream& os, LatticeAlgebra const& A) {
  std::size_t n = A.size();
  os << "algebra " << A.name() << "\n";
  os << "size " << n << "\n";
  os << "labels";
  for (auto const& l : A.labels()) os << ' ' << l;
  os << "\norder\n";
  for (element a = 0; a < n; ++a) {
    for (element b = 0; b < n; ++b) {
      if (a != b && A.leq(a, b)) os << "  " << A.label(a) << ' ' << A.label(b) << "\n";
    }
  }
  os << "end\n";
  for (auto const& [name, o] : A.ops()) {
    os << "op " << name << ' ' << o.arity << "\n";
    std::size_t row = o.arity == 0 ? 1 : n;
    for (std::size_t i = 0; i < o.table.size(); ++i) {
      os << (i % row == 0 ? "  " : " ") << A.label(o.table[i]);
      if ((i + 1) % row == 0) os << "\n";
    }
    os << "end\n";
  }
  if (A.declared_negation()) os << "negation " << print(*A.declared_negation()) << "\n";
}

/// A builtin name (see builtin()) or the path of an algebra file.
inline LatticeAlgebra load_algebra(std::string const& name) {
  if (auto b = builtin(name)) return *b;
  std::ifstream in(name);
  if (!in) throw Error("no builtin algebra or readable file named '" + name + "'");
  return read_algebra(in);
}

}  // namespace mvml
