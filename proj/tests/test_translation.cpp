#include <catch_amalgamated.hpp>

#include "mvml/mvml.hpp"

using namespace mvml;

namespace {

std::shared_ptr<LatticeAlgebra const> share(LatticeAlgebra A) {
  return std::make_shared<LatticeAlgebra const>(std::move(A));
}

bool k_equivalent(Formula const& a, Formula const& b) {
  return !k_solver_valid(iff(a, b)).satisfiable;
}

Formula star(std::uint32_t i, element a) { return var(Var::star(i, a)); }

// Every valuation of the letters of f on F.
template <class Fn>
void each_model(Frame const& F, std::shared_ptr<LatticeAlgebra const> const& A,
                std::vector<Var> const& vars, Fn fn) {
  std::size_t digits = vars.size() * F.size();
  std::vector<element> d(digits, 0);
  while (true) {
    Valuation v;
    for (std::size_t i = 0; i < vars.size(); ++i)
      for (world w = 0; w < F.size(); ++w) v[vars[i]].push_back(d[i * F.size() + w]);
    fn(Model(F, A, v));
    std::size_t k = digits;
    while (k > 0 && ++d[k - 1] == A->size()) d[--k] = 0;
    if (k == 0) return;
  }
}

}  // namespace

TEST_CASE("translation of letters") {
  auto L3 = lukasiewicz_chain(3);
  for (element a = 0; a < 3; ++a) CHECK(translate_value(L3, p(1), a) == star(1, a));
}

TEST_CASE("translation of a conjunction over 2") {
  auto two = boolean_power(1);
  auto t = translate_value(two, conj(p(1), p(2)), 1);
  CHECK(k_equivalent(t, conj(star(1, 1), star(2, 1))));
}

TEST_CASE("bottom value of a diamond at a dead end") {
  auto L3 = share(lukasiewicz_chain(3));
  Model M(Frame(1), L3, {{Var::plain(1), {2}}});
  auto N = star_model(M);
  CHECK(eval(N, translate_value(*L3, dia(p(1)), L3->bottom()), 0) == 1);
  CHECK(switch_check(M, dia(p(1))));
}

TEST_CASE("star models") {
  auto L3 = share(lukasiewicz_chain(3));
  Frame F(2, {{0, 1}});
  Model M(F, L3, {{Var::plain(1), {1, 2}}, {Var::plain(2), {2, 2}}});
  auto N = star_model(M);
  CHECK(N.frame == F);
  CHECK(N.value(Var::star(1, 1), 0) == 1);
  CHECK(N.value(Var::star(1, 0), 0) == 0);
  CHECK(N.value(Var::star(1, 2), 0) == 0);
  for (element a = 0; a < 3; ++a) {
    CHECK(N.value(Var::star(2, a), 0) == (a == 2 ? 1 : 0));
    CHECK(N.value(Var::star(2, a), 1) == (a == 2 ? 1 : 0));
  }
}

TEST_CASE("switch lemma on small models") {
  auto two = share(boolean_power(1));
  FormulaGenerator gen2(two->signature(), {2, 2, 4, true});
  Rng rng(8);
  auto U = enumerate_frames(2);
  for (int i = 0; i < 200; ++i) {
    Formula f = gen2(rng);
    Frame const& F = U.frames[rng.below(U.frames.size())];
    auto vs = variables(f);
    CHECK(switch_check(Model(F, two, random_valuation(rng, {vs.begin(), vs.end()}, F.size(), 2)), f));
  }
  auto L3 = share(lukasiewicz_chain(3));
  Frame chain(2, {{0, 1}});
  Formula f = box(dia(p(1)));
  std::size_t n = 0;
  each_model(chain, L3, {Var::plain(1)}, [&](Model const& M) {
    ++n;
    CHECK(switch_check(M, f));
  });
  CHECK(n == 9);
}

TEST_CASE("exactly one value holds per world") {
  for (auto const* name : {"l4", "g3", "2^2", "k3"}) {
    auto A = share(*builtin(name));
    Translator T(*A);
    FormulaGenerator gen(A->signature(), {2, 2, 4, true});
    Rng rng(12);
    auto U = enumerate_frames(3);
    for (int i = 0; i < 100; ++i) {
      Formula f = gen(rng);
      Frame const& F = U.frames[rng.below(U.frames.size())];
      auto vs = variables(f);
      Model M(F, A, random_valuation(rng, {vs.begin(), vs.end()}, F.size(), A->size()));
      auto r = switch_check_report(M, f, T);
      CHECK(r.mismatches == 0);
      CHECK(r.not_exactly_one == 0);
      CHECK(r.checks == F.size() * A->size());
    }
  }
}

TEST_CASE("translator domain") {
  auto L3 = lukasiewicz_chain(3);
  Translator T(L3);
  CHECK_THROWS_AS(T(p(1), 3), DomainError);
  CHECK_THROWS_AS(T(star(1, 0), 0), DomainError);
}

TEST_CASE("modal rank is not increased") {
  Rng rng(4);
  for (auto const* name : {"2", "l3", "g3", "k3"}) {
    auto A = *builtin(name);
    Translator plain(A), folded(A, {true});
    FormulaGenerator gen(A.signature(), {2, 3, 5, true});
    for (int i = 0; i < 100; ++i) {
      Formula f = gen(rng);
      for (element a = 0; a < A.size(); ++a) {
        CHECK(modal_rank(plain(f, a)) == modal_rank(f));
        CHECK(modal_rank(folded(f, a)) <= modal_rank(f));
      }
    }
  }
}

TEST_CASE("simplified translations are equivalent") {
  Rng rng(9);
  auto L3 = lukasiewicz_chain(3);
  Translator plain(L3), folded(L3, {true});
  FormulaGenerator gen(L3.signature(), {2, 2, 3, true});
  for (int i = 0; i < 40; ++i) {
    Formula f = gen(rng);
    for (element a = 0; a < 3; ++a) CHECK(k_equivalent(plain(f, a), folded(f, a)));
  }
}

TEST_CASE("exactly-one theory") {
  auto two = boolean_power(1);
  auto th = tstar_theory(two, {Var::plain(1)});
  std::vector<Formula> expect{disj(star(1, 0), star(1, 1)), neg(conj(star(1, 0), star(1, 1)))};
  CHECK(th == expect);
  CHECK(tstar_theory(lukasiewicz_chain(3), {Var::plain(1)}).size() == 4);

  auto L3 = share(lukasiewicz_chain(3));
  Rng rng(2);
  auto U = enumerate_frames(3);
  auto ax = tstar_theory(*L3, {Var::plain(1), Var::plain(2)});
  for (int i = 0; i < 50; ++i) {
    Frame const& F = U.frames[rng.below(U.frames.size())];
    Model M(F, L3, random_valuation(rng, {Var::plain(1), Var::plain(2)}, F.size(), 3));
    auto N = star_model(M);
    for (auto const& g : ax) CHECK(globally_true(N, g));
  }
}

TEST_CASE("reconstructing a model from its star model") {
  auto L3 = share(lukasiewicz_chain(3));
  Frame F(2, {{0, 1}, {1, 1}});
  Model M(F, L3, {{Var::plain(1), {1, 0}}, {Var::plain(2), {2, 1}}});
  auto R = reconstruct_model(star_model(M), L3, {Var::plain(1), Var::plain(2)});
  CHECK(R.valuation == M.valuation);

  Valuation v;
  v[Var::star(1, 0)] = {0, 0};
  v[Var::star(1, 1)] = {1, 0};
  v[Var::star(1, 2)] = {0, 0};
  Model N(F, two(), v);
  try {
    reconstruct_model(N, L3, {Var::plain(1)});
    FAIL("no error");
  } catch (PreconditionError const& e) {
    std::string msg = e.what();
    CHECK(msg.find("p1") != std::string::npos);
    CHECK(msg.find("world 1") != std::string::npos);
  }
  v[Var::star(1, 0)] = {0, 1};
  CHECK(reconstruct_model(Model(F, two(), v), L3, {Var::plain(1)}).value(Var::plain(1), 0) == 1);
}

TEST_CASE("phi star of a letter over 2") {
  auto two = boolean_power(1);
  auto s = phi_star(two, p(1));
  auto expect = disj(neg(big_and(tstar_theory(two, {Var::plain(1)}))), star(1, 1));
  CHECK(k_equivalent(s, expect));
}

TEST_CASE("phi star defines the same frames on two worlds") {
  auto U = enumerate_frames(2);
  Rng rng(31);
  for (auto const* name : {"l3", "g3", "k3"}) {
    auto A = *builtin(name);
    FormulaGenerator gen(A.signature(), {2, 2, 4, true});
    for (int i = 0; i < 15; ++i) {
      Formula f = gen(rng);
      INFO(name << " " << print(f));
      CHECK(compare_definability(A, f, U).identical());
    }
  }
}

TEST_CASE("reading classical formulas through a term") {
  auto G3 = godel_chain(3);
  auto nn = UnaryTerm::parse("~~x", G3.signature());
  CHECK(t_wrap(nn, p(1)) == parse("~~p1", G3.signature()));
  auto f = parse("box p1 -> p1", Signature::classical());
  auto g = interpret_classical(f, G3.negation_term());
  CHECK(g == parse("~box p1 | p1", G3.signature()));
  CHECK_THROWS_AS(interpret_classical(Formula::op("imp", {p(1), p(2)}), G3.negation_term()),
                  SignatureError);

  auto U = enumerate_frames(3);
  auto wrapped = t_wrap(nn, g);
  for (auto const& F : U.frames) {
    CHECK(frame_validates(F, boolean_power(1), f) == frame_validates(F, G3, wrapped));
  }
}

TEST_CASE("consequence transport through the interpretation") {
  auto cls = Signature::classical();
  auto U = enumerate_frames(2);
  std::vector<std::pair<std::vector<std::string>, std::string>> cases{
      {{"p1"}, "box p1"},
      {{"box p1 -> p1"}, "box p2 -> p2"},
      {{"p1 | p2"}, "dia p1 | p2"},
      {{"box p1 -> box box p1", "p1 -> dia p1"}, "dia dia p1 -> dia p1"},
      {{}, "box (p1 -> p2) -> (box p1 -> box p2)"},
  };
  for (auto const* name : {"g3", "l3"}) {
    auto A = *builtin(name);
    auto t = *find_boolean_interpretation(A, A.negation_term());
    for (auto const& [gs, fs] : cases) {
      std::vector<Formula> gamma, tgamma;
      for (auto const& g : gs) {
        gamma.push_back(parse(g, cls));
        tgamma.push_back(t_wrap(t.term, interpret_classical(gamma.back(), A.negation_term())));
      }
      auto f = parse(fs, cls);
      auto tf = t_wrap(t.term, interpret_classical(f, A.negation_term()));
      for (auto const& F : U.frames) {
        INFO(name << " " << fs);
        CHECK(check_consequence(F, boolean_power(1), gamma, f).holds ==
              check_consequence(F, A, tgamma, tf).holds);
      }
    }
  }
}

TEST_CASE("the quotient model evaluates classical formulas blockwise") {
  auto cls = Signature::classical();
  FormulaGenerator gen(cls, {2, 2, 4, true});
  Rng rng(17);
  auto U = enumerate_frames(3);
  for (auto const* name : {"g3", "l3", "g4"}) {
    auto A = share(*builtin(name));
    auto I = *find_boolean_interpretation(*A, A->negation_term());
    for (int i = 0; i < 60; ++i) {
      Formula psi = gen(rng);
      Formula read = interpret_classical(psi, A->negation_term());
      Frame const& F = U.frames[rng.below(U.frames.size())];
      auto vs = variables(psi);
      Model M(F, A, random_valuation(rng, {vs.begin(), vs.end()}, F.size(), A->size()));
      Model Mq = interpreted_model(M, I);
      auto in_a = eval_all(M, read);
      auto in_q = eval_all(Mq, psi);
      auto wrapped = eval_all(M, t_wrap(I.term, read));
      for (world w = 0; w < F.size(); ++w) {
        CHECK(I.kernel.block_of(in_a[w]) == in_q[w]);
        CHECK(wrapped[w] == eval_term(*A, I.term, in_a[w]));
      }
    }
  }
}

TEST_CASE("powers of 2 evaluate componentwise") {
  auto cls = Signature::classical();
  FormulaGenerator gen(cls, {2, 2, 4, true});
  Rng rng(23);
  auto U = enumerate_frames(3);
  for (unsigned k : {2U, 3U}) {
    auto B = share(boolean_power(k));
    for (int i = 0; i < 60; ++i) {
      Formula f = gen(rng);
      Frame const& F = U.frames[rng.below(U.frames.size())];
      auto vs = variables(f);
      Model M(F, B, random_valuation(rng, {vs.begin(), vs.end()}, F.size(), B->size()));
      auto whole = eval_all(M, f);
      for (unsigned c = 0; c < k; ++c) {
        auto part = eval_all(boolean_component(M, c), f);
        for (world w = 0; w < F.size(); ++w) CHECK(((whole[w] >> c) & 1U) == part[w]);
      }
    }
  }
  auto L3 = share(lukasiewicz_chain(3));
  CHECK_THROWS_AS(boolean_component(Model(Frame(1), L3, {}), 0), PreconditionError);
}
