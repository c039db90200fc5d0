#pragma once

// Frame and model files. Line oriented; '#' starts a comment.
//
//   worlds <n>
//   edge <u> <v>              one per line, worlds are 0-based
//
// A model file adds an algebra reference and one valuation line per letter:
//
//   algebra <builtin name or path>
//   worlds <n>
//   edge <u> <v>
//   valuation <letter> <value at world 0> ... <value at world n-1>
//
// Letters are p<k>, p<k>@<a> (translation letters) or q<k>@<a>; values are
// element labels or indices.

#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "mvml/algebra_io.hpp"
#include "mvml/evaluation.hpp"

namespace mvml {

/// Parses p<k>, p<k>@<a> or q<k>@<a>.
inline std::optional<Var> parse_letter(std::string_view s) {
  if (s.size() < 2 || (s[0] != 'p' && s[0] != 'q')) return std::nullopt;
  auto at = s.find('@');
  auto idx = s.substr(1, at == std::string_view::npos ? std::string_view::npos : at - 1);
  if (!detail::all_digits(idx) || idx.size() > 9) return std::nullopt;
  auto i = static_cast<std::uint32_t>(std::stoul(std::string(idx)));
  if (at == std::string_view::npos) {
    if (s[0] == 'q') return std::nullopt;
    return Var::plain(i);
  }
  auto tag = s.substr(at + 1);
  if (!detail::all_digits(tag) || tag.size() > 9) return std::nullopt;
  auto a = static_cast<element>(std::stoul(std::string(tag)));
  return s[0] == 'p' ? Var::star(i, a) : Var::q(i, a);
}

namespace detail {

struct FrameLines {
  std::optional<Frame> frame;
  std::optional<std::pair<std::size_t, std::string>> algebra;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> valuation;
};

inline FrameLines read_frame_lines(std::istream& in, bool allow_model) {
  LineReader r{in};
  std::vector<std::string> toks;
  std::string raw;
  FrameLines out;
  std::vector<std::pair<std::size_t, std::pair<world, world>>> edges;
  std::optional<std::size_t> n;
  auto number = [&](std::string const& t) -> std::uint32_t {
    if (!all_digits(t) || t.size() > 9) r.fail("expected a number, got '" + t + "'");
    return static_cast<std::uint32_t>(std::stoul(t));
  };
  while (r.next(toks, raw)) {
    auto const& key = toks[0];
    if (key == "worlds") {
      if (toks.size() != 2) r.fail("expected: worlds <n>");
      n = number(toks[1]);
      if (*n == 0) r.fail("a frame needs at least one world");
    } else if (key == "edge") {
      if (toks.size() != 3) r.fail("expected: edge <u> <v>");
      edges.push_back({r.line_no, {number(toks[1]), number(toks[2])}});
    } else if (allow_model && key == "algebra") {
      if (toks.size() != 2) r.fail("expected: algebra <name or path>");
      out.algebra = std::pair{r.line_no, toks[1]};
    } else if (allow_model && key == "valuation") {
      if (toks.size() < 2) r.fail("expected: valuation <letter> <values...>");
      out.valuation.emplace_back(r.line_no, std::vector<std::string>(toks.begin() + 1, toks.end()));
    } else {
      r.fail("unknown directive '" + key + "'");
    }
  }
  if (!n) throw ParseError("missing 'worlds'", r.line_no, 1);
  Frame F(*n);
  for (auto const& [line, e] : edges) {
    if (e.first >= *n || e.second >= *n) {
      throw ParseError("edge endpoint outside 0.." + std::to_string(*n - 1), line, 1);
    }
    F.add_edge(e.first, e.second);
  }
  out.frame = std::move(F);
  return out;
}

}  // namespace detail

inline Frame read_frame(std::istream& in) { return *detail::read_frame_lines(in, false).frame; }

inline void write_frame(std::ostream& os, Frame const& F) {
  os << "worlds " << F.size() << "\n";
  for (auto [u, v] : F.edges()) os << "edge " << u << ' ' << v << "\n";
}

/// `resolve` turns the algebra reference into an algebra; by default a
/// builtin name or a file path.
inline Model read_model(std::istream& in,
                        std::function<LatticeAlgebra(std::string const&)> resolve = load_algebra) {
  auto lines = detail::read_frame_lines(in, true);
  if (!lines.algebra) throw ParseError("missing 'algebra'", 1, 1);
  auto A = std::make_shared<LatticeAlgebra const>(resolve(lines.algebra->second));
  Frame const& F = *lines.frame;
  Valuation v;
  for (auto const& [line, toks] : lines.valuation) {
    auto x = parse_letter(toks[0]);
    if (!x) throw ParseError("bad letter '" + toks[0] + "'", line, 1);
    if (toks.size() != F.size() + 1) {
      throw ParseError("valuation of " + toks[0] + " needs " + std::to_string(F.size()) +
                       " values",
                       line, 1);
    }
    auto& row = v[*x];
    for (std::size_t i = 1; i < toks.size(); ++i) {
      auto e = A->find(toks[i]);
      if (!e) throw ParseError("unknown element '" + toks[i] + "'", line, 1);
      row.push_back(*e);
    }
  }
  return Model(F, A, std::move(v));
}

inline void write_model(std::ostream& os, Model const& M, std::string const& algebra_ref) {
  os << "algebra " << algebra_ref << "\n";
  write_frame(os, M.frame);
  for (auto const& [x, row] : M.valuation) {
    os << "valuation " << to_string(x);
    for (element e : row) os << ' ' << M.algebra->label(e);
    os << "\n";
  }
}

inline std::string model_text(Model const& M, std::string const& algebra_ref) {
  std::ostringstream os;
  write_model(os, M, algebra_ref);
  return os.str();
}

inline std::string frame_text(Frame const& F) {
  std::ostringstream os;
  write_frame(os, F);
  return os.str();
}

inline Frame load_frame(std::string const& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read frame file '" + path + "'");
  return read_frame(in);
}

inline Model load_model(std::string const& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read model file '" + path + "'");
  return read_model(in);
}

}  // namespace mvml
