#include <catch_amalgamated.hpp>

#include "mvml/mvml.hpp"

using namespace mvml;

namespace {

bool reflexive(Frame const& F) {
  for (world w = 0; w < F.size(); ++w)
    if (!F.edge(w, w)) return false;
  return true;
}

bool transitive(Frame const& F) {
  for (world a = 0; a < F.size(); ++a)
    for (world b : F.successors(a))
      for (world c : F.successors(b))
        if (!F.edge(a, c)) return false;
  return true;
}

std::vector<std::size_t> where(FrameUniverse const& U, bool (*pred)(Frame const&)) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < U.frames.size(); ++i)
    if (pred(U.frames[i])) out.push_back(i);
  return out;
}

}  // namespace

TEST_CASE("frame universes") {
  CHECK(enumerate_frames(1).frames.size() == 2);
  CHECK(enumerate_frames(2).frames.size() == 2 + 16);
  auto U = enumerate_frames(3);
  CHECK(U.frames.size() == 2 + 16 + 512);
  std::size_t three = 0;
  for (auto const& F : U.frames) three += F.size() == 3;
  CHECK(three == 512);
  // unlabelled digraphs with loops: 2, 10, 104
  CHECK(enumerate_frames(3, true).frames.size() == 2 + 10 + 104);
  CHECK_THROWS_AS(enumerate_frames(5), ResourceError);
  CHECK_THROWS_AS(enumerate_frames(0), ParameterError);
}

TEST_CASE("isomorphism") {
  Frame a(3, {{0, 1}, {1, 2}});
  Frame b(3, {{2, 0}, {0, 1}});
  Frame c(3, {{0, 1}, {0, 2}});
  CHECK(isomorphic(a, b));
  CHECK_FALSE(isomorphic(a, c));
}

TEST_CASE("generated subframes") {
  Frame F(2, {{0, 1}});
  CHECK(generated_subframe(F, 1) == Frame(1));
  CHECK(generated_subframe(F, 0) == F);
  Frame G(4, {{1, 3}, {3, 1}, {0, 2}});
  CHECK(generated_subframe(G, 1) == Frame(2, {{0, 1}, {1, 0}}));
}

TEST_CASE("disjoint unions") {
  std::vector<Frame> parts{Frame(1, {{0, 0}}), Frame(2, {{0, 1}})};
  CHECK(disjoint_union(parts) == Frame(3, {{0, 0}, {1, 2}}));
}

TEST_CASE("bounded morphisms") {
  Frame cycle(2, {{0, 1}, {1, 0}});
  Frame loop(1, {{0, 0}});
  CHECK(is_bounded_morphism({cycle, loop, {0, 0}}));
  for (auto const& F : enumerate_frames(2).frames) {
    std::vector<world> id(F.size());
    for (world w = 0; w < F.size(); ++w) id[w] = w;
    CHECK(is_bounded_morphism({F, F, id}));
  }
  // forth holds, back fails: the point 0 has no successor mapping to 0
  CHECK_FALSE(is_bounded_morphism({Frame(2, {{0, 1}}), Frame(1, {{0, 0}}), {0, 0}}));
  auto images = bounded_morphic_images(cycle);
  bool found = false;
  for (auto const& m : images) found = found || isomorphic(m.target, loop);
  CHECK(found);
}

TEST_CASE("bounded morphic images agree with brute force") {
  // every map into every frame of size <= n, checked directly
  auto U = enumerate_frames(3);
  Rng rng(71);
  for (int i = 0; i < 40; ++i) {
    Frame const& F = U.frames[rng.below(U.frames.size())];
    auto images = bounded_morphic_images(F);
    for (auto const& T : U.frames) {
      if (T.size() > F.size()) continue;
      bool expect = false;
      std::vector<world> f(F.size(), 0);
      std::size_t total = 1;
      for (std::size_t k = 0; k < F.size(); ++k) total *= T.size();
      for (std::size_t code = 0; code < total && !expect; ++code) {
        std::size_t c = code;
        std::vector<bool> hit(T.size(), false);
        for (std::size_t k = 0; k < F.size(); ++k) {
          f[k] = static_cast<world>(c % T.size());
          c /= T.size();
          hit[f[k]] = true;
        }
        if (std::find(hit.begin(), hit.end(), false) != hit.end()) continue;
        expect = is_bounded_morphism({F, T, f});
      }
      bool got = false;
      for (auto const& m : images) got = got || isomorphic(m.target, T);
      CHECK(got == expect);
    }
  }
}

TEST_CASE("defined classes") {
  auto U = enumerate_frames(2);
  auto two = boolean_power(1);
  std::vector<Formula> none;
  CHECK(defined_class(two, none, U).size() == U.frames.size());
  auto t = parse("box p1 -> p1", two.signature());
  auto refl = where(U, reflexive);
  CHECK(defined_class(two, std::span(&t, 1), U) == refl);

  auto G3 = godel_chain(3);
  auto wrapped = t_wrap(UnaryTerm::parse("~~x", G3.signature()),
                        interpret_classical(t, G3.negation_term()));
  CHECK(defined_class(G3, std::span(&wrapped, 1), U) == refl);

  auto U3 = enumerate_frames(3);
  auto four = parse("box p1 -> box box p1", two.signature());
  CHECK(defined_class(two, std::span(&four, 1), U3) == where(U3, transitive));

  DefinabilityOptions par;
  par.workers = 3;
  CHECK(defined_class(two, std::span(&four, 1), U3, par) == where(U3, transitive));
}

TEST_CASE("comparing many-valued and classical definability") {
  auto U = enumerate_frames(2);
  auto two = boolean_power(1);
  FormulaGenerator gen(two.signature(), {2, 2, 4, true});
  Rng rng(73);
  for (int i = 0; i < 10; ++i) CHECK(compare_definability(two, gen(rng), U).identical());

  auto L3 = lukasiewicz_chain(3);
  auto U3 = enumerate_frames(3);
  auto t = parse("box p1 -> p1", Signature::classical());
  auto tf = t_wrap(multiple_term(3), interpret_classical(t, L3.negation_term()));
  auto cmp = compare_definability(L3, tf, U3);
  CHECK(cmp.identical());
  CHECK(cmp.many_valued == where(U3, reflexive));
}

TEST_CASE("closure of reflexive frames") {
  auto U = enumerate_frames(3);
  auto refl = where(U, reflexive);
  for (auto op : {Closure::generated_subframe, Closure::disjoint_union,
                  Closure::bounded_morphic_image}) {
    auto r = closure_check(refl, U, op);
    INFO(to_string(op));
    CHECK(r.closed());
    CHECK(r.tested > 0);
  }
}

TEST_CASE("two-world frames are not closed under disjoint union") {
  auto U = enumerate_frames(4);
  std::vector<std::size_t> two_worlds;
  for (std::size_t i = 0; i < U.frames.size(); ++i)
    if (U.frames[i].size() == 2) two_worlds.push_back(i);
  auto r = closure_check(two_worlds, U, Closure::disjoint_union);
  CHECK_FALSE(r.closed());
  CHECK(r.violations.front().result.size() == 4);

  // in the three-world universe the unions do not fit and are not tested
  auto U3 = enumerate_frames(3);
  std::vector<std::size_t> small;
  for (std::size_t i = 0; i < U3.frames.size(); ++i)
    if (U3.frames[i].size() == 2) small.push_back(i);
  auto r3 = closure_check(small, U3, Closure::disjoint_union);
  CHECK(r3.closed());
  CHECK(r3.not_tested == small.size() * small.size());
}

TEST_CASE("a class that is not closed under generated subframes") {
  auto U = enumerate_frames(2);
  // frames with a world that has no successor, but only on two worlds
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < U.frames.size(); ++i)
    if (U.frames[i].size() == 2 && U.frames[i] == Frame(2, {{0, 1}})) s.push_back(i);
  auto r = closure_check(s, U, Closure::generated_subframe);
  CHECK_FALSE(r.closed());
}

TEST_CASE("a Lukasiewicz-defined class is closed") {
  auto L3 = lukasiewicz_chain(3);
  auto U = enumerate_frames(3);
  auto t = parse("box p1 -> p1", Signature::classical());
  auto tf = t_wrap(multiple_term(3), interpret_classical(t, L3.negation_term()));
  auto cls = defined_class(L3, std::span(&tf, 1), U);
  for (auto op : {Closure::generated_subframe, Closure::disjoint_union,
                  Closure::bounded_morphic_image}) {
    CHECK(closure_check(cls, U, op).closed());
  }
}
