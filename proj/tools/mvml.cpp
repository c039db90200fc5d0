// mvml: command-line front end.
//
// Exit status: 0 success or true, 1 false or counterexample found,
// 2 usage, parse or resource error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "mvml/mvml.hpp"

namespace {

using namespace mvml;
using json = nlohmann::ordered_json;

struct Config {
  std::string algebra;
  std::string frame;
  std::string model;
  std::vector<std::string> formulas;
  std::string formula_file;
  std::vector<std::string> premises;
  std::uint64_t budget = default_budget();
  std::size_t max_size = 9;
  std::string format = "text";
  std::uint64_t seed = 1;
  std::size_t max_worlds = 3;
  unsigned max_rank = 2;
  std::size_t universe = 3;
  unsigned workers = 1;
  bool simplify = false;
  std::vector<std::string> ops;
  bool iso = false;
  bool classical = false;
  std::string mode = "consequence";
  std::string term;
  std::string negation;
  std::string value;
  std::string backend = "auto";
  std::size_t count = 500;
  bool decide = false;
};

/// Ordered key/value report; the text form prints one field per line and
/// the JSON form is the same object.
class Report {
 public:
  explicit Report(std::string command, std::uint64_t seed) {
    j_["command"] = std::move(command);
    j_["seed"] = seed;
  }

  json& operator[](std::string const& key) { return j_[key]; }

  void print(std::ostream& os, std::string const& format) const {
    if (format == "json") {
      os << j_.dump(2) << "\n";
      return;
    }
    field(os, j_, 0);
  }

 private:
  static void field(std::ostream& os, json const& obj, std::size_t depth) {
    std::string pad(2 * depth, ' ');
    for (auto const& [key, v] : obj.items()) {
      if (v.is_object() && !v.empty()) {
        os << pad << key << ":\n";
        field(os, v, depth + 1);
      } else if (v.is_string() && v.get<std::string>().find('\n') != std::string::npos) {
        os << pad << key << ":\n";
        std::istringstream in(v.get<std::string>());
        for (std::string line; std::getline(in, line);) os << pad << "  " << line << "\n";
      } else if (v.is_array() && !v.empty() && v.front().is_object()) {
        os << pad << key << ":\n";
        for (auto const& item : v) {
          os << pad << "  -\n";
          field(os, item, depth + 2);
        }
      } else if (v.is_string()) {
        os << pad << key << ": " << v.get<std::string>() << "\n";
      } else {
        os << pad << key << ": " << v.dump() << "\n";
      }
    }
  }

  json j_;
};

LatticeAlgebra algebra_of(Config const& c) {
  if (c.algebra.empty()) throw Error("--algebra is required");
  return load_algebra(c.algebra);
}

std::vector<Formula> formulas_of(Config const& c, Signature const& sig) {
  std::vector<std::string> texts = c.formulas;
  if (!c.formula_file.empty()) {
    std::ifstream in(c.formula_file);
    if (!in) throw Error("cannot read formula file '" + c.formula_file + "'");
    for (std::string line; std::getline(in, line);) {
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      texts.push_back(line);
    }
  }
  if (texts.empty()) throw Error("a formula is required (--formula or --formula-file)");
  std::vector<Formula> out;
  for (auto const& t : texts) out.push_back(parse(t, sig));
  return out;
}

Formula formula_of(Config const& c, Signature const& sig) {
  auto fs = formulas_of(c, sig);
  if (fs.size() != 1) throw Error("exactly one formula is expected here");
  return fs.front();
}

std::vector<Formula> premises_of(Config const& c, Signature const& sig) {
  std::vector<Formula> out;
  for (auto const& t : c.premises) out.push_back(parse(t, sig));
  return out;
}

CheckOptions check_options(Config const& c) {
  CheckOptions o;
  o.budget = c.budget;
  o.workers = c.workers;
  if (c.backend == "enumerate") {
    o.backend = Backend::enumerate;
  } else if (c.backend == "sat") {
    o.backend = Backend::sat;
  } else if (c.backend != "auto") {
    throw Error("--backend must be auto, enumerate or sat");
  }
  return o;
}

element element_of(LatticeAlgebra const& A, std::string const& text) {
  auto e = A.find(text);
  if (!e) throw Error("no element '" + text + "' in " + A.name());
  return *e;
}

UnaryTerm negation_of(Config const& c, LatticeAlgebra const& A) {
  if (!c.negation.empty()) return UnaryTerm::parse(c.negation, A.signature());
  return A.negation_term();
}

std::string labels_of(LatticeAlgebra const& A, std::vector<element> const& es) {
  std::string s;
  for (std::size_t i = 0; i < es.size(); ++i) s += (i ? " " : "") + A.label(es[i]);
  return s;
}

std::string table_text(LatticeAlgebra const& B) {
  std::ostringstream os;
  auto row = [&](std::string const& head, auto f) {
    os << head;
    for (element a = 0; a < B.size(); ++a) os << ' ' << B.label(f(a));
    os << "\n";
  };
  os << "elements:";
  for (auto const& l : B.labels()) os << ' ' << l;
  os << "\n";
  for (element a = 0; a < B.size(); ++a) {
    row("meet " + B.label(a) + ":", [&](element b) { return B.meet(a, b); });
  }
  for (element a = 0; a < B.size(); ++a) {
    row("join " + B.label(a) + ":", [&](element b) { return B.join(a, b); });
  }
  if (B.has_op("neg", 1)) row("neg:", [&](element a) { return B.op("neg").table[a]; });
  return os.str();
}

/// The term t for --classical: --term if given, else the search result.
std::pair<UnaryTerm, UnaryTerm> interpretation_terms(Config const& c, LatticeAlgebra const& A) {
  UnaryTerm u = negation_of(c, A);
  if (!c.term.empty()) {
    UnaryTerm t = UnaryTerm::parse(c.term, A.signature());
    if (!certify_interpretation(A, u, t)) {
      throw Error("term " + print(t) + " does not interpret a Boolean algebra in " + A.name());
    }
    return {t, u};
  }
  InterpretationSearch s;
  s.max_size = c.max_size;
  auto r = find_boolean_interpretation(A, u, s);
  if (!r) {
    throw Error("no Boolean interpretation of " + A.name() + " within " +
                std::to_string(c.max_size) + " nodes");
  }
  return {r->term, u};
}

/// Formulas as read in A: directly, or classical ones wrapped as t(φ).
std::vector<Formula> class_formulas(Config const& c, LatticeAlgebra const& A, Report& rep) {
  if (!c.classical) return formulas_of(c, A.signature());
  auto [t, u] = interpretation_terms(c, A);
  rep["term"] = print(t);
  std::vector<Formula> out;
  for (auto const& f : formulas_of(c, Signature::classical())) {
    out.push_back(t_wrap(t, interpret_classical(f, u)));
  }
  return out;
}

json indices(std::vector<std::size_t> const& v) { return json(v); }

// ---------------------------------------------------------------- commands

int cmd_algebra_check(Config const& c, Report& rep) {
  LatticeData d;
  if (auto b = builtin(c.algebra)) {
    d = b->data();
  } else {
    std::ifstream in(c.algebra);
    if (!in) throw Error("no builtin algebra or readable file named '" + c.algebra + "'");
    d = read_algebra_data(in);
  }
  rep["algebra"] = d.name;
  auto v = validate_lattice(d);
  if (!v.ok()) {
    rep["lattice"] = false;
    json list = json::array();
    for (auto const& x : v.violations) list.push_back(x.kind + ": " + x.detail);
    rep["violations"] = list;
    return 1;
  }
  LatticeAlgebra A(std::move(d));
  rep["lattice"] = true;
  rep["size"] = A.size();
  rep["labels"] = A.labels();
  rep["bottom"] = A.label(A.bottom());
  rep["top"] = A.label(A.top());
  json ops = json::object();
  for (auto const& [name, o] : A.ops()) ops[name] = o.arity;
  rep["operations"] = ops;
  if (auto bad = detail::check_distributive(A)) {
    rep["distributive"] = "no: " + bad->condition + " fails at " + labels_of(A, bad->witness);
  } else {
    rep["distributive"] = "yes";
  }
  try {
    rep["negation"] = print(negation_of(c, A));
  } catch (SignatureError const&) {
    rep["negation"] = "none";
  }
  json classes = json::object();
  for (auto cls : {AlgebraClass::boolean, AlgebraClass::pseudocomplemented,
                   AlgebraClass::stone, AlgebraClass::heyting, AlgebraClass::mv}) {
    std::string key(to_string(cls));
    try {
      auto r = class_check(A, cls);
      if (r.holds) {
        classes[key] = "yes";
      } else {
        classes[key] = "no: " + r.condition + " fails at " + labels_of(A, r.witness);
      }
    } catch (SignatureError const& e) {
      classes[key] = std::string("n/a: ") + e.what();
    }
  }
  rep["classes"] = classes;
  return 0;
}

int cmd_interpret(Config const& c, Report& rep) {
  auto A = algebra_of(c);
  UnaryTerm u = negation_of(c, A);
  rep["algebra"] = A.name();
  rep["negation"] = print(u);
  std::optional<Interpretation> r;
  if (!c.term.empty()) {
    r = certify_interpretation(A, u, UnaryTerm::parse(c.term, A.signature()));
  } else {
    InterpretationSearch s;
    s.max_size = c.max_size;
    r = find_boolean_interpretation(A, u, s);
  }
  rep["max_size"] = c.max_size;
  if (!r) {
    rep["term"] = "not found";
    return 1;
  }
  rep["term"] = print(r->term);
  rep["term_prefix"] = serialize(r->term);
  rep["term_size"] = r->term.size();
  json blocks = json::array();
  for (auto const& b : r->kernel.blocks()) blocks.push_back(labels_of(A, b));
  rep["kernel"] = blocks;
  rep["congruence"] = true;
  rep["quotient_boolean"] = bool(class_check(r->quotient, AlgebraClass::boolean));
  rep["quotient"] = table_text(r->quotient);
  return 0;
}

int cmd_eval(Config const& c, Report& rep) {
  if (c.model.empty()) throw Error("--model is required");
  Model M = load_model(c.model);
  rep["algebra"] = M.algebra->name();
  json results = json::array();
  bool all = true;
  for (auto const& f : formulas_of(c, M.algebra->signature())) {
    auto vals = eval_all(M, f);
    json row;
    row["formula"] = print(f);
    json labels = json::array();
    for (auto e : vals) labels.push_back(M.algebra->label(e));
    row["values"] = labels;
    bool g = std::all_of(vals.begin(), vals.end(), [&](element e) { return e == M.algebra->top(); });
    row["globally_true"] = g;
    all = all && g;
    results.push_back(row);
  }
  rep["results"] = results;
  return 0;
}

int cmd_validate(Config const& c, Report& rep) {
  auto A = algebra_of(c);
  if (c.frame.empty()) throw Error("--frame is required");
  Frame F = load_frame(c.frame);
  auto sig = A.signature();
  auto f = formula_of(c, sig);
  auto gamma = premises_of(c, sig);
  rep["algebra"] = A.name();
  rep["formula"] = print(f);
  if (!gamma.empty()) {
    json ps = json::array();
    for (auto const& g : gamma) ps.push_back(print(g));
    rep["premises"] = ps;
  }
  auto v = check_consequence(F, A, gamma, f, check_options(c));
  rep["verdict"] = v.holds ? (gamma.empty() ? "valid" : "consequence holds")
                           : (gamma.empty() ? "not valid" : "consequence fails");
  if (!v.holds) {
    rep["failing_world"] = v.failing_world;
    rep["counterexample"] = model_text(*v.counterexample, c.algebra);
    return 1;
  }
  return 0;
}

int cmd_translate(Config const& c, Report& rep) {
  auto A = algebra_of(c);
  auto f = formula_of(c, A.signature());
  Translator T(A, {c.simplify});
  rep["algebra"] = A.name();
  rep["formula"] = print(f);
  std::vector<element> which;
  if (!c.value.empty()) {
    which.push_back(element_of(A, c.value));
  } else {
    for (element a = 0; a < A.size(); ++a) which.push_back(a);
  }
  json out = json::array();
  for (element a : which) {
    auto t = T(f, a);
    json row;
    row["value"] = A.label(a);
    row["rank"] = modal_rank(t);
    row["size"] = length(t);
    row["translation"] = print(t);
    out.push_back(row);
  }
  rep["translations"] = out;
  return 0;
}

int cmd_phi_star(Config const& c, Report& rep) {
  auto A = algebra_of(c);
  auto f = formula_of(c, A.signature());
  auto s = phi_star(A, f, {c.simplify});
  rep["algebra"] = A.name();
  rep["formula"] = print(f);
  rep["rank"] = modal_rank(s);
  rep["size"] = length(s);
  rep["phi_star"] = print(s);
  return 0;
}

json letter_legend(SubformulaIndex const& idx) {
  json legend = json::object();
  for (std::uint32_t i = 0; i < idx.size(); ++i) legend["q" + std::to_string(i)] = print(idx.at(i));
  return legend;
}

int cmd_reduce(Config const& c, Report& rep) {
  auto A = algebra_of(c);
  auto sig = A.signature();
  auto f = formula_of(c, sig);
  auto gamma = premises_of(c, sig);
  rep["algebra"] = A.name();
  rep["mode"] = c.mode;
  rep["formula"] = print(f);
  TranslateOptions opt{c.simplify};
  if (c.mode == "consequence") {
    auto r = reduce_consequence(A, gamma, f, opt);
    rep["letters"] = letter_legend(r.theory.index);
    json ps = json::array();
    std::size_t total = 0;
    for (auto const& p : r.premises) {
      ps.push_back(print(p));
      total += length(p);
    }
    rep["premises"] = ps;
    rep["conclusion"] = print(r.conclusion);
    rep["premise_size"] = total;
    return 0;
  }
  if (c.mode != "validity") throw Error("--mode must be consequence or validity");
  if (!gamma.empty()) throw Error("validity mode takes no premises");
  auto g = reduce_validity(A, f, opt);
  rep["letters"] = letter_legend(SubformulaIndex(std::span<Formula const>(&f, 1)));
  rep["size"] = length(g);
  rep["reduced"] = print(g);
  if (c.decide) {
    auto r = k_solver_valid(g);
    rep["verdict"] = r.satisfiable ? "not valid" : "valid";
    return r.satisfiable ? 1 : 0;
  }
  return 0;
}

int cmd_prove_k(Config const& c, Report& rep) {
  auto f = formula_of(c, Signature::classical());
  auto r = k_tableau_valid(f);
  rep["formula"] = print(f);
  rep["tableau_nodes"] = r.nodes;
  if (!r.satisfiable) {
    rep["verdict"] = "valid";
    return 0;
  }
  rep["verdict"] = "not valid";
  rep["countermodel_world"] = 0;
  rep["countermodel"] = model_text(r.model->to_model(variables(f)), "2");
  return 1;
}

int cmd_define(Config const& c, Report& rep) {
  auto A = algebra_of(c);
  auto U = enumerate_frames(c.universe, c.iso);
  rep["algebra"] = A.name();
  auto phi = class_formulas(c, A, rep);
  json fs = json::array();
  for (auto const& f : phi) fs.push_back(print(f));
  rep["formulas"] = fs;
  auto cls = defined_class(A, phi, U, {check_options(c), c.workers});
  rep["universe"] = c.universe;
  rep["frames"] = U.frames.size();
  rep["defined"] = cls.size();
  rep["indices"] = indices(cls);
  return 0;
}

int cmd_compare(Config const& c, Report& rep) {
  auto A = algebra_of(c);
  auto U = enumerate_frames(c.universe, c.iso);
  rep["algebra"] = A.name();
  rep["universe"] = c.universe;
  rep["frames"] = U.frames.size();
  DefinabilityOptions opt{check_options(c), c.workers};
  DefinabilityComparison cmp;
  if (c.classical) {
    auto [t, u] = interpretation_terms(c, A);
    auto f = formula_of(c, Signature::classical());
    Formula tf = t_wrap(t, interpret_classical(f, u));
    rep["term"] = print(t);
    rep["formula"] = print(f);
    rep["wrapped"] = print(tf);
    cmp = compare_classes(defined_class(A, std::span<Formula const>(&tf, 1), U, opt),
                          defined_class(*two(), std::span<Formula const>(&f, 1), U, opt));
  } else {
    auto f = formula_of(c, A.signature());
    rep["formula"] = print(f);
    cmp = compare_definability(A, f, U, opt);
  }
  rep["many_valued_class"] = cmp.many_valued.size();
  rep["classical_class"] = cmp.classical.size();
  if (cmp.identical()) {
    rep["result"] = "classes identical (" + std::to_string(cmp.many_valued.size()) + " of " +
                    std::to_string(U.frames.size()) + " frames)";
    return 0;
  }
  rep["result"] = "classes differ on " + std::to_string(cmp.mismatches.size()) + " frames";
  rep["mismatches"] = indices(cmp.mismatches);
  rep["counterexample_frame"] = frame_text(U.frames[cmp.mismatches.front()]);
  return 1;
}

int cmd_closure(Config const& c, Report& rep) {
  auto A = algebra_of(c);
  auto U = enumerate_frames(c.universe, false);
  rep["algebra"] = A.name();
  auto phi = class_formulas(c, A, rep);
  auto cls = defined_class(A, phi, U, {check_options(c), c.workers});
  rep["universe"] = c.universe;
  rep["class_size"] = cls.size();
  std::vector<Closure> ops;
  for (auto const& o : c.ops) {
    if (o == "generated_subframe") ops.push_back(Closure::generated_subframe);
    else if (o == "disjoint_union") ops.push_back(Closure::disjoint_union);
    else if (o == "bounded_morphic_image") ops.push_back(Closure::bounded_morphic_image);
    else throw Error("unknown closure operation '" + o + "'");
  }
  if (ops.empty()) {
    ops = {Closure::generated_subframe, Closure::disjoint_union, Closure::bounded_morphic_image};
  }
  bool closed = true;
  json results = json::object();
  for (auto op : ops) {
    auto r = closure_check(cls, U, op);
    json j;
    j["tested"] = r.tested;
    j["not_tested"] = r.not_tested;
    j["violations"] = r.violations.size();
    if (!r.violations.empty()) {
      closed = false;
      auto const& v = r.violations.front();
      j["first_violation"] = v.detail + " of frames " + json(v.sources).dump();
      j["first_violation_frame"] = frame_text(v.result);
    }
    results[std::string(to_string(op))] = j;
  }
  rep["closure"] = results;
  rep["result"] = closed ? "closed" : "violations found";
  return closed ? 0 : 1;
}

int cmd_switch_suite(Config const& c, Report& rep) {
  auto A = std::make_shared<LatticeAlgebra const>(algebra_of(c));
  auto U = enumerate_frames(c.max_worlds);
  Rng rng(c.seed);
  FormulaShape shape;
  shape.max_rank = c.max_rank;
  FormulaGenerator gen(A->signature(), shape);
  Translator T(*A);
  std::size_t failures = 0, not_one = 0;
  std::optional<std::string> first;
  for (std::size_t i = 0; i < c.count; ++i) {
    Formula f = gen(rng);
    Frame const& F = U.frames[rng.below(U.frames.size())];
    auto vs = variables(f);
    Model M(F, A, random_valuation(rng, {vs.begin(), vs.end()}, F.size(), A->size()));
    auto r = switch_check_report(M, f, T);
    if (r.mismatches || r.not_exactly_one) {
      ++failures;
      not_one += r.not_exactly_one != 0;
      if (!first) first = print(f) + "\n" + model_text(M, c.algebra);
    }
  }
  rep["algebra"] = A->name();
  rep["max_worlds"] = c.max_worlds;
  rep["max_rank"] = c.max_rank;
  rep["cases"] = c.count;
  rep["failures"] = failures;
  rep["exactly_one_violations"] = not_one;
  if (failures == 0) {
    rep["result"] = "PASS " + std::to_string(c.count) + " cases";
    return 0;
  }
  rep["result"] = "FAIL " + std::to_string(failures) + " of " + std::to_string(c.count) + " cases";
  rep["first_failure"] = *first;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finitely-valued modal logic over crisp Kripke frames"};
  app.require_subcommand(1);
  Config c;

  auto add = [&](CLI::App* s, std::initializer_list<std::string> flags) {
    for (auto const& f : flags) {
      if (f == "algebra") s->add_option("--algebra", c.algebra, "builtin name or algebra file");
      if (f == "frame") s->add_option("--frame", c.frame, "frame file");
      if (f == "model") s->add_option("--model", c.model, "model file");
      if (f == "formula") {
        s->add_option("--formula", c.formulas, "formula text (repeatable)");
        s->add_option("--formula-file", c.formula_file, "file with one formula per line");
      }
      if (f == "premise") s->add_option("--premise", c.premises, "premise formula (repeatable)");
      if (f == "budget") {
        s->add_option("--budget", c.budget, "valuation enumeration budget")
            ->check(CLI::PositiveNumber);
        s->add_option("--backend", c.backend, "auto | enumerate | sat");
        s->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
      }
      if (f == "max-size") {
        s->add_option("--max-size", c.max_size, "term size cap for the interpretation search")
            ->check(CLI::PositiveNumber);
      }
      if (f == "universe") {
        s->add_option("--universe", c.universe, "frames with up to this many worlds")
            ->check(CLI::Range(1, 4));
        s->add_flag("--iso", c.iso, "one frame per isomorphism class");
      }
      if (f == "classical") {
        s->add_flag("--classical", c.classical, "formulas are classical; wrap them as t(phi)");
        s->add_option("--term", c.term, "interpreting term t(x), default: searched");
        s->add_option("--negation", c.negation, "negation term u(x)");
      }
      if (f == "simplify") s->add_flag("--simplify", c.simplify, "fold constants in translations");
    }
    s->add_option("--format", c.format, "text | json")->check(CLI::IsMember({"text", "json"}));
    s->add_option("--seed", c.seed, "random seed");
  };

  std::map<CLI::App*, std::function<int(Config const&, Report&)>> run;
  auto sub = [&](std::string name, std::string help, std::initializer_list<std::string> flags,
                 int (*fn)(Config const&, Report&)) {
    auto* s = app.add_subcommand(std::move(name), std::move(help));
    add(s, flags);
    run[s] = fn;
    return s;
  };

  auto* ac = sub("algebra-check", "validate an algebra and test its class memberships",
                 {"algebra"}, cmd_algebra_check);
  ac->add_option("--negation", c.negation, "negation term u(x)");
  auto* in = sub("interpret", "search for a term interpreting a Boolean algebra",
                 {"algebra", "max-size"}, cmd_interpret);
  in->add_option("--negation", c.negation, "negation term u(x)");
  in->add_option("--term", c.term, "certify this term instead of searching");
  sub("eval", "evaluate formulas in a model", {"model", "formula"}, cmd_eval);
  sub("validate", "frame validity or global consequence on one frame",
      {"algebra", "frame", "formula", "premise", "budget"}, cmd_validate);
  auto* tr = sub("translate", "the classical translation T^a", {"algebra", "formula", "simplify"},
                 cmd_translate);
  tr->add_option("--value", c.value, "element a (label or index); default: all");
  sub("phi-star", "the classical formula phi*", {"algebra", "formula", "simplify"}, cmd_phi_star);
  auto* rd = sub("reduce", "polynomial reduction to classical consequence or validity",
                 {"algebra", "formula", "premise", "simplify"}, cmd_reduce);
  rd->add_option("--mode", c.mode, "consequence | validity")
      ->check(CLI::IsMember({"consequence", "validity"}));
  rd->add_flag("--decide", c.decide, "decide the validity instance in K");
  sub("prove-k", "K validity by tableau", {"formula"}, cmd_prove_k);
  sub("define", "frames of a universe defined by formulas",
      {"algebra", "formula", "universe", "classical", "budget", "max-size"}, cmd_define);
  sub("compare", "compare definable frame classes",
      {"algebra", "formula", "universe", "classical", "budget", "max-size"}, cmd_compare);
  auto* cl = sub("closure", "closure of a defined class under frame constructions",
                 {"algebra", "formula", "universe", "classical", "budget", "max-size"},
                 cmd_closure);
  cl->add_option("--op", c.ops,
                 "generated_subframe | disjoint_union | bounded_morphic_image (repeatable)");
  auto* sw = sub("switch-suite", "randomised check of the value translation", {"algebra"},
                 cmd_switch_suite);
  sw->add_option("--max-worlds", c.max_worlds, "largest frame")->check(CLI::Range(1, 4));
  sw->add_option("--max-rank", c.max_rank, "largest modal rank");
  sw->add_option("--count", c.count, "number of cases");

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (auto const& [s, fn] : run) {
    if (!s->parsed()) continue;
    Report rep(s->get_name(), c.seed);
    try {
      int code = fn(c, rep);
      rep.print(std::cout, c.format);
      return code;
    } catch (std::exception const& e) {
      std::cerr << "error: " << e.what() << "\n";
    }
    return 2;
  }
  return 2;
}
