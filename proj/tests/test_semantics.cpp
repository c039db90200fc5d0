#include <catch_amalgamated.hpp>

#include <sstream>

#include "mvml/mvml.hpp"

using namespace mvml;

namespace {

// Direct recursive reading of the truth clauses.
element naive(Model const& M, Formula const& f, world w) {
  auto const& A = *M.algebra;
  switch (f.kind()) {
    case Formula::Kind::var:
      return M.value(f.var(), w);
    case Formula::Kind::dia: {
      element acc = A.bottom();
      for (world v : M.frame.successors(w)) acc = A.join(acc, naive(M, f.child(), v));
      return acc;
    }
    case Formula::Kind::box: {
      element acc = A.top();
      for (world v : M.frame.successors(w)) acc = A.meet(acc, naive(M, f.child(), v));
      return acc;
    }
    case Formula::Kind::op:
      break;
  }
  std::vector<element> args;
  for (auto const& g : f.args()) args.push_back(naive(M, g, w));
  if (f.is_op("and")) return A.meet(args[0], args[1]);
  if (f.is_op("or")) return A.join(args[0], args[1]);
  if (f.is_op("top")) return A.top();
  if (f.is_op("bot")) return A.bottom();
  return A.apply(f.op_name(), args);
}

std::shared_ptr<LatticeAlgebra const> share(LatticeAlgebra A) {
  return std::make_shared<LatticeAlgebra const>(std::move(A));
}

// First valuation (mixed radix, first (var, world) most significant) that
// refutes the consequence, by plain counting.
std::optional<Valuation> first_refutation(Frame const& F, LatticeAlgebra const& A,
                                          std::vector<Formula> const& gamma, Formula const& f) {
  std::set<Var> vs = variables(f);
  for (auto const& g : gamma) collect_variables(g, vs);
  std::vector<Var> vars(vs.begin(), vs.end());
  std::size_t digits = vars.size() * F.size();
  std::vector<element> d(digits, 0);
  auto shared = share(A);
  while (true) {
    Valuation v;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      for (world w = 0; w < F.size(); ++w) v[vars[i]].push_back(d[i * F.size() + w]);
    }
    Model M(F, shared, v);
    bool prem = true;
    for (auto const& g : gamma)
      for (world w = 0; w < F.size(); ++w) prem = prem && naive(M, g, w) == A.top();
    if (prem) {
      for (world w = 0; w < F.size(); ++w)
        if (naive(M, f, w) != A.top()) return v;
    }
    std::size_t k = digits;
    while (k > 0 && ++d[k - 1] == A.size()) d[--k] = 0;
    if (k == 0) return std::nullopt;
  }
}

}  // namespace

TEST_CASE("frames") {
  Frame F(3, {{0, 1}, {1, 2}});
  CHECK(F.edge(0, 1));
  CHECK_FALSE(F.edge(1, 0));
  CHECK(F.successors(1) == std::vector<world>{2});
  CHECK(Frame::from_mask(3, F.mask()) == F);
  CHECK_THROWS_AS(Frame(0), StructuralError);
  CHECK_THROWS_AS(Frame(2, {{0, 2}}), StructuralError);
}

TEST_CASE("evaluation: empty successor sets") {
  auto L3 = share(lukasiewicz_chain(3));
  Model M(Frame(1), L3, {{Var::plain(1), {1}}});
  CHECK(eval(M, box(p(1)), 0) == L3->top());
  CHECK(eval(M, dia(p(1)), 0) == L3->bottom());
}

TEST_CASE("evaluation: Lukasiewicz negation of a diamond") {
  auto L3 = share(lukasiewicz_chain(3));
  Model M(Frame(2, {{0, 1}}), L3, {{Var::plain(1), {0, 1}}});
  CHECK(L3->label(eval(M, dia(p(1)), 0)) == "1/2");
  CHECK(L3->label(eval(M, parse("~dia p1", L3->signature()), 0)) == "1/2");
}

TEST_CASE("evaluation agrees with the recursive clauses") {
  Rng rng(3);
  for (auto const* name : {"2", "l3", "g4", "2^2", "k3"}) {
    auto A = share(*builtin(name));
    FormulaGenerator gen(A->signature(), {2, 3, 5, true});
    auto U = enumerate_frames(3);
    for (int i = 0; i < 200; ++i) {
      Formula f = gen(rng);
      Frame const& F = U.frames[rng.below(U.frames.size())];
      auto vs = variables(f);
      Model M(F, A, random_valuation(rng, {vs.begin(), vs.end()}, F.size(), A->size()));
      auto vals = eval_all(M, f);
      for (world w = 0; w < F.size(); ++w) CHECK(vals[w] == naive(M, f, w));
    }
  }
}

TEST_CASE("models reject malformed valuations") {
  auto L3 = share(lukasiewicz_chain(3));
  CHECK_THROWS_AS(Model(Frame(2), L3, {{Var::plain(1), {0}}}), DomainError);
  CHECK_THROWS_AS(Model(Frame(1), L3, {{Var::plain(1), {7}}}), DomainError);
  Model M(Frame(1), L3, {});
  CHECK_THROWS_AS(eval(M, p(1), 0), DomainError);
}

TEST_CASE("global truth") {
  auto G3 = share(godel_chain(3));
  auto f = parse("p1 -> p1", G3->signature());
  for (element a = 0; a < 3; ++a) {
    CHECK(globally_true(Model(Frame(1), G3, {{Var::plain(1), {a}}}), f));
  }
  CHECK_FALSE(globally_true(Model(Frame(2), G3, {{Var::plain(1), {2, 1}}}), p(1)));
  CHECK(globally_true(Model(Frame(2), G3, {{Var::plain(1), {0, 0}}}), box(p(1))));
}

TEST_CASE("frame validity") {
  auto L3 = lukasiewicz_chain(3);
  auto two = boolean_power(1);
  auto t = parse("box p1 -> p1", L3.signature());
  CHECK(frame_validates(Frame(1, {{0, 0}}), L3, t));
  auto v = check_consequence(Frame(1), two, {}, parse("box p1 -> p1", two.signature()));
  CHECK_FALSE(v.holds);
  REQUIRE(v.counterexample);
  CHECK(v.counterexample->value(Var::plain(1), 0) == 0);
  for (std::size_t m = 0; m < 16; ++m) {
    CHECK(frame_validates(Frame::from_mask(2, m), L3, parse("top & (bot -> bot)", L3.signature())));
  }
}

TEST_CASE("global consequence") {
  auto L3 = lukasiewicz_chain(3);
  auto sig = L3.signature();
  auto U = enumerate_frames(2);
  auto f = parse("box p1 -> dia p2", sig);
  std::vector<Formula> self{f};
  CHECK(consequence_on_frames(U.frames, L3, self, f));
  for (auto const& F : U.frames) {
    CHECK(check_consequence(F, L3, {}, f).holds == frame_validates(F, L3, f));
  }
  Frame chain(2, {{0, 1}});
  std::vector<Formula> prem{p(1)};
  CHECK(check_consequence(chain, L3, prem, box(p(1))).holds);
  CHECK_FALSE(check_consequence(chain, L3, {}, box(p(1))).holds);
}

TEST_CASE("counterexamples are the first in enumeration order") {
  Rng rng(5);
  for (auto const* name : {"l3", "g3", "k3"}) {
    auto A = *builtin(name);
    FormulaGenerator gen(A.signature(), {2, 2, 4, true});
    auto U = enumerate_frames(2);
    for (int i = 0; i < 60; ++i) {
      Formula f = gen(rng);
      std::vector<Formula> gamma;
      if (rng.chance(50)) gamma.push_back(gen(rng));
      Frame const& F = U.frames[rng.below(U.frames.size())];
      CheckOptions o;
      o.backend = Backend::enumerate;
      auto v = check_consequence(F, A, gamma, f, o);
      auto expect = first_refutation(F, A, gamma, f);
      REQUIRE(v.holds == !expect.has_value());
      if (expect) CHECK(v.counterexample->valuation == *expect);
    }
  }
}

TEST_CASE("worker count does not change verdicts") {
  auto L3 = lukasiewicz_chain(3);
  auto f = parse("box (p1 -> p2) -> (dia p1 -> dia p2)", L3.signature());
  Frame F(3, {{0, 1}, {1, 2}, {2, 0}, {0, 0}});
  CheckOptions one;
  one.backend = Backend::enumerate;
  CheckOptions four = one;
  four.workers = 4;
  auto a = check_consequence(F, L3, {}, f, one);
  auto b = check_consequence(F, L3, {}, f, four);
  CHECK(a.holds == b.holds);
  if (!a.holds) CHECK(a.counterexample->valuation == b.counterexample->valuation);

  auto g = parse("p1 -> box p2", L3.signature());
  a = check_consequence(F, L3, {}, g, one);
  b = check_consequence(F, L3, {}, g, four);
  REQUIRE_FALSE(a.holds);
  CHECK(a.counterexample->valuation == b.counterexample->valuation);
}

TEST_CASE("enumeration budget") {
  auto L3 = lukasiewicz_chain(3);
  CheckOptions o;
  o.budget = 100;
  o.backend = Backend::enumerate;
  auto f = parse("p1 & p2 -> p3", L3.signature());
  CHECK_THROWS_AS(check_consequence(Frame(3), L3, {}, f, o), ResourceError);
  o.budget = 3 * 3 * 3;
  CHECK_NOTHROW(check_consequence(Frame(1), L3, {}, f, o));
}

TEST_CASE("SAT backend agrees with enumeration over 2") {
  auto two = boolean_power(1);
  FormulaGenerator gen(two.signature(), {3, 2, 5, true});
  Rng rng(21);
  auto U = enumerate_frames(3);
  CheckOptions en;
  en.backend = Backend::enumerate;
  CheckOptions sat;
  sat.backend = Backend::sat;
  for (int i = 0; i < 400; ++i) {
    Formula f = gen(rng);
    std::vector<Formula> gamma;
    if (rng.chance(40)) gamma.push_back(gen(rng));
    Frame const& F = U.frames[rng.below(U.frames.size())];
    auto a = check_consequence(F, two, gamma, f, en);
    auto b = check_consequence(F, two, gamma, f, sat);
    INFO(print(f));
    REQUIRE(a.holds == b.holds);
    if (!b.holds) {
      Model const& M = *b.counterexample;
      for (auto const& g : gamma) CHECK(globally_true(M, g));
      CHECK_FALSE(globally_true(M, f));
    }
  }
  CHECK_THROWS_AS(check_consequence(Frame(1), lukasiewicz_chain(3), {}, p(1), sat),
                  PreconditionError);
}

TEST_CASE("model and frame files") {
  auto M = load_model("samples/l3.model");
  CHECK(M.frame.size() == 2);
  CHECK(M.algebra->name() == "L3");
  std::istringstream in(model_text(M, "l3"));
  auto N = read_model(in);
  CHECK(N.frame == M.frame);
  CHECK(N.valuation == M.valuation);
  auto F = load_frame("samples/chain3.frame");
  CHECK(F.edge_count() == 3);
  std::istringstream bad("worlds 2\nedge 0 5\n");
  try {
    read_frame(bad);
    FAIL("no error");
  } catch (ParseError const& e) {
    CHECK(e.line() == 2);
  }
  std::istringstream letters("algebra l3\nworlds 1\nvaluation p1@2 1\nvaluation q3@0 0\n");
  auto Q = read_model(letters);
  CHECK(Q.valuation.contains(Var::star(1, 2)));
  CHECK(Q.valuation.contains(Var::q(3, 0)));
}
