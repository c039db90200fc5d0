// Acceptance suite: one PASS/FAIL line per criterion. Exit status 1 if any
// criterion fails. Optional arguments select criteria by number.

#include <atomic>
#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "mvml/mvml.hpp"

using namespace mvml;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Shared = std::shared_ptr<LatticeAlgebra const>;

Shared share(LatticeAlgebra A) { return std::make_shared<LatticeAlgebra const>(std::move(A)); }

FrameUniverse const& universe3() {
  static FrameUniverse const U = enumerate_frames(3);
  return U;
}

unsigned workers() { return std::max(2U, std::thread::hardware_concurrency()); }

/// Runs body(i) for i in [0, n) on a few threads.
void parallel_for(std::size_t n, std::function<void(std::size_t)> const& body) {
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < workers(); ++t) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < n;) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

/// Seeded formula/model pairs: `formulas` formulas, each on every frame of
/// the universe with one random valuation.
struct Suite {
  std::vector<Formula> formulas;
  std::vector<std::vector<Model>> models;  // models[i][frame]
  std::size_t pairs() const { return formulas.size() * universe3().frames.size(); }
};

Suite make_suite(Shared const& A, Signature const& sig, std::size_t formulas,
                 std::uint64_t seed) {
  Suite s;
  Rng rng(seed);
  FormulaShape shape;
  shape.letters = 2;
  shape.max_rank = 2;
  FormulaGenerator gen(sig, shape);
  std::vector<Var> letters{Var::plain(1), Var::plain(2)};
  for (std::size_t i = 0; i < formulas; ++i) {
    s.formulas.push_back(gen(rng));
    auto& row = s.models.emplace_back();
    for (auto const& F : universe3().frames) {
      row.emplace_back(F, A, random_valuation(rng, letters, F.size(), A->size()));
    }
  }
  return s;
}

std::vector<char const*> const suite_algebras{"2", "2^2", "l3", "l4", "g3"};
constexpr std::size_t suite_formulas = 20;  // x 530 frames = 10600 pairs per algebra

// ---------------------------------------------------------------- 1 and 2

struct SwitchTotals {
  std::size_t pairs = 0, mismatches = 0, not_one = 0;
  std::string first;
};

SwitchTotals const& switch_totals() {
  static SwitchTotals const totals = [] {
    SwitchTotals t;
    std::mutex mu;
    for (std::size_t k = 0; k < suite_algebras.size(); ++k) {
      auto A = share(*builtin(suite_algebras[k]));
      auto suite = make_suite(A, A->signature(), suite_formulas, 1000 + k);
      parallel_for(suite.formulas.size(), [&](std::size_t i) {
        Translator T(*A);
        std::size_t mm = 0, no = 0;
        std::string first;
        for (auto const& M : suite.models[i]) {
          auto r = switch_check_report(M, suite.formulas[i], T);
          mm += r.mismatches != 0;
          no += r.not_exactly_one != 0;
          if ((r.mismatches || r.not_exactly_one) && first.empty()) {
            first = A->name() + " " + print(suite.formulas[i]);
          }
        }
        std::lock_guard lock(mu);
        t.mismatches += mm;
        t.not_one += no;
        if (t.first.empty()) t.first = first;
      });
      t.pairs += suite.pairs();
    }
    return t;
  }();
  return totals;
}

Outcome criterion1() {
  auto const& t = switch_totals();
  std::ostringstream os;
  os << t.pairs << " formula/model pairs over " << suite_algebras.size() << " algebras, "
     << t.mismatches << " failures";
  if (!t.first.empty()) os << "; first: " << t.first;
  return {t.mismatches == 0 && t.pairs >= 500 * suite_algebras.size(), os.str()};
}

Outcome criterion2() {
  auto const& t = switch_totals();
  std::ostringstream os;
  os << t.pairs << " pairs, " << t.not_one << " exactly-one violations";
  return {t.not_one == 0, os.str()};
}

// ---------------------------------------------------------------- 3

Outcome criterion3() {
  auto const& U = universe3();
  std::ostringstream os;
  bool pass = true;
  DefinabilityOptions opt;
  opt.workers = workers();
  for (auto const* name : {"l3", "g3"}) {
    auto A = *builtin(name);
    FormulaShape shape;
    shape.max_rank = 2;
    FormulaGenerator gen(A.signature(), shape);
    Rng rng(3000);
    std::set<std::string> seen;
    std::size_t formulas = 0, mismatches = 0, nontrivial = 0;
    while (formulas < 50) {
      Formula f = gen(rng);
      if (modal_rank(f) == 0 || !seen.insert(print(f)).second) continue;
      ++formulas;
      auto cmp = compare_definability(A, f, U, opt);
      mismatches += cmp.mismatches.size();
      nontrivial += !cmp.many_valued.empty() && cmp.many_valued.size() < U.frames.size();
      if (!cmp.identical() && pass) {
        os << "mismatch for " << print(f) << " on " << name << "; ";
        pass = false;
      }
    }
    os << A.name() << ": " << formulas << " formulas (" << nontrivial
       << " with proper non-empty classes), " << mismatches << " mismatched frames; ";
  }
  return {pass, os.str() + std::to_string(U.frames.size()) + " frames"};
}

// ---------------------------------------------------------------- 4

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

Outcome criterion4() {
  auto const& U = universe3();
  auto cls = Signature::classical();
  DefinabilityOptions opt;
  opt.workers = workers();
  struct Case {
    char const* text;
    bool (*pred)(Frame const&);
  };
  std::vector<Case> cases{{"box p1 -> p1", reflexive},
                          {"box p1 -> box box p1", transitive},
                          {"p1 -> dia p1", reflexive}};
  auto G3 = godel_chain(3);
  auto L3 = lukasiewicz_chain(3);
  std::vector<std::pair<LatticeAlgebra const*, UnaryTerm>> terms{
      {&G3, UnaryTerm::parse("~~x", G3.signature())}, {&L3, multiple_term(3)}};
  bool pass = true;
  std::ostringstream os;
  for (auto const& c : cases) {
    auto f = parse(c.text, cls);
    auto classical = defined_class(*two(), std::span(&f, 1), U, opt);
    std::vector<std::size_t> textbook;
    for (std::size_t i = 0; i < U.frames.size(); ++i)
      if (c.pred(U.frames[i])) textbook.push_back(i);
    if (classical != textbook) {
      pass = false;
      os << c.text << ": 2-class differs from the correspondent; ";
    }
    for (auto const& [A, t] : terms) {
      auto tf = t_wrap(t, interpret_classical(f, A->negation_term()));
      auto many = defined_class(*A, std::span(&tf, 1), U, opt);
      if (many != classical) {
        pass = false;
        os << c.text << " on " << A->name() << ": classes differ; ";
      }
    }
    os << c.text << " -> " << classical.size() << " frames; ";
  }
  return {pass, os.str() + "G3 with ~~x, L3 with 3x"};
}

// ---------------------------------------------------------------- 5 and 6

Outcome criterion5() {
  auto cls = Signature::classical();
  std::size_t checks = 0, failures = 0;
  std::string first;
  for (std::size_t k = 0; k < suite_algebras.size(); ++k) {
    auto A = share(*builtin(suite_algebras[k]));
    auto I = find_boolean_interpretation(*A, A->negation_term());
    if (!I) return {false, A->name() + " has no interpretation term"};
    auto suite = make_suite(A, cls, suite_formulas, 5000 + k);
    for (std::size_t i = 0; i < suite.formulas.size(); ++i) {
      Formula read = interpret_classical(suite.formulas[i], A->negation_term());
      Formula wrapped = t_wrap(I->term, read);
      for (auto const& M : suite.models[i]) {
        auto base = eval_all(M, read);
        auto tw = eval_all(M, wrapped);
        auto quot = eval_all(interpreted_model(M, *I), suite.formulas[i]);
        for (world w = 0; w < M.frame.size(); ++w) {
          ++checks;
          bool ok = tw[w] == eval_term(*A, I->term, base[w]) &&
                    I->kernel.block_of(base[w]) == quot[w];
          if (!ok && failures++ == 0) first = A->name() + " " + print(suite.formulas[i]);
        }
      }
    }
  }
  std::ostringstream os;
  os << checks << " world checks over classical formulas, " << failures << " failures";
  if (!first.empty()) os << "; first: " << first;
  return {failures == 0, os.str()};
}

Outcome criterion6() {
  auto cls = Signature::classical();
  std::size_t checks = 0, failures = 0;
  for (unsigned k : {2U, 3U}) {
    auto B = share(boolean_power(k));
    auto suite = make_suite(B, cls, suite_formulas, 6000 + k);
    for (std::size_t i = 0; i < suite.formulas.size(); ++i) {
      for (auto const& M : suite.models[i]) {
        auto whole = eval_all(M, suite.formulas[i]);
        for (unsigned c = 0; c < k; ++c) {
          auto part = eval_all(boolean_component(M, c), suite.formulas[i]);
          for (world w = 0; w < M.frame.size(); ++w) {
            ++checks;
            failures += ((whole[w] >> c) & 1U) != part[w];
          }
        }
      }
    }
  }
  std::ostringstream os;
  os << checks << " component checks over 2^2 and 2^3, " << failures << " failures";
  return {failures == 0, os.str()};
}

// ---------------------------------------------------------------- 7

Outcome criterion7() {
  bool pass = true;
  std::ostringstream os;
  InterpretationSearch s;
  s.max_size = 9;
  for (auto const* name : {"g3", "g4", "g5", "l3", "l4", "l5"}) {
    auto A = *builtin(name);
    auto u = A.negation_term();
    auto r = find_boolean_interpretation(A, u, s);
    bool ok = r && r->term.size() <= 9 && eval_term(A, r->term, A.top()) == A.top() &&
              is_congruence(A, eq_kernel(A, r->term), u) &&
              class_check(quotient(A, eq_kernel(A, r->term), u), AlgebraClass::boolean);
    pass = pass && ok;
    os << A.name() << ": " << (r ? print(r->term) : "none") << (ok ? "" : " (not certified)")
       << "; ";
  }
  auto K3 = kleene_chain();
  auto k = find_boolean_interpretation(K3, K3.negation_term(), s);
  pass = pass && !k;
  os << "K3: " << (k ? "unexpected " + print(k->term) : "not found within size " + std::to_string(s.max_size));
  return {pass, os.str()};
}

// ---------------------------------------------------------------- 8

// Length of reduce_validity relative to |f|·(rank f + 1). Measured worst on
// the seeded formulas is about 90 (dia box p2: 3 symbols, 812 after
// reduction); the pin is a regression bound on that.
constexpr double pinned_size_ratio = 100.0;

Outcome criterion8() {
  auto A = lukasiewicz_chain(3);
  auto const& U = universe3();
  FormulaShape shape;
  shape.max_rank = 2;
  FormulaGenerator gen(A.signature(), shape);
  Rng rng(8000);
  struct Case {
    std::vector<Formula> gamma;
    Formula f;
  };
  std::vector<Case> cases;
  while (cases.size() < 200) {
    Case c{{}, gen(rng)};
    for (std::uint64_t k = 0, n = rng.below(3); k < n; ++k) c.gamma.push_back(gen(rng));
    cases.push_back(std::move(c));
  }
  std::atomic<std::size_t> agree{0}, holds{0}, frame_checks{0};
  std::mutex mu;
  std::string first;
  parallel_for(cases.size(), [&](std::size_t i) {
    auto const& c = cases[i];
    auto red = reduce_consequence(A, c.gamma, c.f);
    bool ok = true, all = true;
    for (auto const& F : U.frames) {
      bool many = check_consequence(F, A, c.gamma, c.f).holds;
      bool classical = check_consequence(F, *two(), red.premises, red.conclusion).holds;
      ok = ok && many == classical;
      all = all && many;
      ++frame_checks;
    }
    if (ok) ++agree;
    if (all) ++holds;
    if (!ok) {
      std::lock_guard lock(mu);
      if (first.empty()) first = print(c.f);
    }
  });

  // size growth on a rank-2 family: f_k = f_{k-1} + box (p & dia p')
  double worst = 0;
  std::ostringstream growth;
  // Each step adds the same number of symbols, so the reduced length must
  // grow by a fixed amount too (compared two steps apart for the p1/p2 swap).
  Formula f = box(dia(p(1)));
  std::vector<std::size_t> lens;
  for (int k = 1; k <= 40; ++k) {
    f = Formula::op("oplus", {f, box(conj(p(1 + k % 2), dia(p(2 - k % 2))))});
    lens.push_back(length(reduce_validity(A, f)));
    double ratio = double(lens.back()) / (3.0 * double(length(f)));
    worst = std::max(worst, ratio);
    if (k % 10 == 0) growth << length(f) << "->" << lens.back() << " ";
  }
  bool steady = true;
  for (std::size_t k = 4; k < lens.size(); ++k)
    steady = steady && lens[k] - lens[k - 1] == lens[k - 2] - lens[k - 3];
  Rng rr(8100);
  for (int i = 0; i < 200; ++i) {
    Formula g = gen(rr);
    double ratio = double(length(reduce_validity(A, g))) /
                   (double(length(g)) * double(modal_rank(g) + 1));
    worst = std::max(worst, ratio);
  }

  std::ostringstream os;
  os << agree << "/" << cases.size() << " (Gamma, f) cases agree on every frame ("
     << frame_checks << " frame checks, " << holds << " consequences hold)";
  if (!first.empty()) os << "; first disagreement: " << first;
  os << "; size ratio max " << worst << " <= " << pinned_size_ratio << ", family growth "
     << (steady ? "constant per step" : "NOT constant per step") << " [" << growth.str() << "]";
  return {agree == cases.size() && worst <= pinned_size_ratio && steady, os.str()};
}

// ---------------------------------------------------------------- 9

Outcome criterion9() {
  auto cls = Signature::classical();
  FormulaShape shape;
  shape.letters = 2;
  shape.max_rank = 2;
  shape.max_depth = 5;
  FormulaGenerator gen(cls, shape);
  Rng rng(9000);
  std::size_t n = 0, disagree = 0, valid = 0;
  std::string first;
  for (; n < 400; ++n) {
    Formula f = gen(rng);
    bool tab = !k_tableau_valid(f).satisfiable;
    bool oracle = k_oracle_valid(f);
    auto sat = k_tableau_sat(f);
    bool sat_ok = sat.satisfiable == k_oracle_sat(f) &&
                  (!sat.satisfiable || eval(sat.model->to_model(variables(f)), f, 0) == 1);
    valid += tab;
    if (tab != oracle || !sat_ok) {
      if (disagree++ == 0) first = print(f);
    }
  }
  auto k = parse("box (p1 -> p2) -> (box p1 -> box p2)", cls);
  bool k_valid = !k_tableau_valid(k).satisfiable && k_oracle_valid(k);
  auto t = parse("box p1 -> p1", cls);
  auto r = k_tableau_valid(t);
  bool t_invalid = r.satisfiable && !k_oracle_valid(t);
  std::string cm;
  if (r.satisfiable) {
    Model M = r.model->to_model(variables(t));
    t_invalid = t_invalid && eval(M, t, 0) == 0;
    cm = model_text(M, "2");
    for (auto& ch : cm)
      if (ch == '\n') ch = ';';
  }
  std::ostringstream os;
  os << n << " formulas, " << disagree << " disagreements (" << valid << " valid)"
     << "; K axiom " << (k_valid ? "valid" : "NOT valid") << "; box p1 -> p1 "
     << (t_invalid ? "invalid, countermodel: " + cm : "NOT refuted");
  if (!first.empty()) os << "; first: " << first;
  return {disagree == 0 && k_valid && t_invalid, os.str()};
}

// ---------------------------------------------------------------- 10

Outcome criterion10() {
  auto A = lukasiewicz_chain(3);
  auto const& U = universe3();
  FormulaShape shape;
  shape.max_rank = 2;
  FormulaGenerator gen(A.signature(), shape);
  Rng rng(10000);
  DefinabilityOptions opt;
  opt.workers = workers();
  std::set<std::vector<std::size_t>> classes;
  std::size_t attempts = 0;
  while (classes.size() < 10 && attempts < 10000) {
    ++attempts;
    Formula f = gen(rng);
    auto cls = defined_class(A, std::span(&f, 1), U, opt);
    if (cls.empty() || cls.size() == U.frames.size()) continue;
    classes.insert(cls);
  }
  bool pass = classes.size() == 10;
  std::size_t tested = 0, not_tested = 0, gs = 0, bm = 0, du = 0;
  for (auto const& cls : classes) {
    auto g = closure_check(cls, U, Closure::generated_subframe);
    auto b = closure_check(cls, U, Closure::bounded_morphic_image);
    auto d = closure_check(cls, U, Closure::disjoint_union);
    gs += g.violations.size();
    bm += b.violations.size();
    du += d.violations.size();
    tested += g.tested + b.tested + d.tested;
    not_tested += d.not_tested;
  }
  pass = pass && gs == 0 && bm == 0 && du == 0;
  std::ostringstream os;
  os << classes.size() << " distinct proper L3-definable classes; " << tested
     << " constructions tested, violations: generated " << gs << ", morphic images " << bm
     << ", unions in budget " << du << " (" << not_tested << " unions exceed 3 worlds)";
  return {pass, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                 criterion5, criterion6, criterion7, criterion8,
                                                 criterion9, criterion10};
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    int n = static_cast<int>(i + 1);
    if (!only.empty() && !only.contains(n)) continue;
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (std::exception const& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all = all && o.pass;
    std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail
              << "  [" << std::fixed << std::setprecision(1) << secs << "s]" << std::endl;
  }
  return all ? 0 : 1;
}
