#pragma once

#include <cstdint>
#include <cstdlib>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "mvml/algebra.hpp"
#include "mvml/errors.hpp"
#include "mvml/formula.hpp"
#include "mvml/frame.hpp"

namespace mvml {

/// Value of each letter at each world: valuation[v][w].
using Valuation = std::map<Var, std::vector<element>>;

struct Model {
  Frame frame;
  std::shared_ptr<LatticeAlgebra const> algebra;
  Valuation valuation;

  Model(Frame f, std::shared_ptr<LatticeAlgebra const> a, Valuation v = {})
      : frame(std::move(f)), algebra(std::move(a)), valuation(std::move(v)) {
    for (auto const& [var, vals] : valuation) {
      if (vals.size() != frame.size()) {
        throw DomainError("valuation of " + to_string(var) + " has " +
                          std::to_string(vals.size()) + " entries for " +
                          std::to_string(frame.size()) + " worlds");
      }
      for (element e : vals) {
        if (e >= algebra->size()) {
          throw DomainError("valuation of " + to_string(var) + " leaves the carrier");
        }
      }
    }
  }

  element value(Var v, world w) const {
    auto it = valuation.find(v);
    if (it == valuation.end()) throw DomainError("no valuation for " + to_string(v));
    return it->second.at(w);
  }
};

/// Formula DAG flattened into instructions over a fixed letter order, for
/// evaluating the same formulas under many valuations.
class CompiledFormula {
 public:
  CompiledFormula(LatticeAlgebra const& A, std::vector<Formula> const& roots,
                  std::vector<Var> const& vars)
      : alg_(&A) {
    for (std::uint32_t i = 0; i < vars.size(); ++i) slot_.emplace(vars[i], i);
    for (auto const& r : roots) roots_.push_back(compile(r));
  }

  std::size_t node_count() const noexcept { return code_.size(); }
  std::size_t root_count() const noexcept { return roots_.size(); }

  /// Evaluates every node at every world. `val[slot * n + w]` is the value
  /// of the slot-th letter at w; results land in `buf[node * n + w]`.
  void run(Frame const& F, std::span<element const> val, std::vector<element>& buf) const {
    std::size_t const n = F.size();
    std::size_t const k = alg_->size();
    buf.resize(code_.size() * n);
    for (std::size_t i = 0; i < code_.size(); ++i) {
      auto const& c = code_[i];
      element* out = &buf[i * n];
      switch (c.code) {
        case Code::var:
          for (std::size_t w = 0; w < n; ++w) out[w] = val[c.arg * n + w];
          break;
        case Code::constant:
          for (std::size_t w = 0; w < n; ++w) out[w] = c.arg;
          break;
        case Code::meet:
        case Code::join: {
          element const* a = &buf[c.kids[0] * n];
          element const* b = &buf[c.kids[1] * n];
          for (std::size_t w = 0; w < n; ++w) {
            out[w] = c.code == Code::meet ? alg_->meet(a[w], b[w]) : alg_->join(a[w], b[w]);
          }
          break;
        }
        case Code::table:
          for (std::size_t w = 0; w < n; ++w) {
            std::size_t idx = 0;
            for (auto kid : c.kids) idx = idx * k + buf[kid * n + w];
            out[w] = c.op->table[idx];
          }
          break;
        case Code::dia:
        case Code::box: {
          element const* a = &buf[c.kids[0] * n];
          bool is_dia = c.code == Code::dia;
          for (world w = 0; w < n; ++w) {
            element acc = is_dia ? alg_->bottom() : alg_->top();
            for (world v : F.successors(w)) {
              acc = is_dia ? alg_->join(acc, a[v]) : alg_->meet(acc, a[v]);
            }
            out[w] = acc;
          }
          break;
        }
      }
    }
  }

  element value(std::vector<element> const& buf, std::size_t root, std::size_t n,
                world w) const {
    return buf[roots_[root] * n + w];
  }

 private:
  enum class Code : std::uint8_t { var, constant, meet, join, table, dia, box };
  struct Instr {
    Code code;
    std::uint32_t arg = 0;
    std::vector<std::uint32_t> kids;
    Operation const* op = nullptr;
  };

  std::uint32_t compile(Formula const& f) {
    if (auto it = memo_.find(f.id()); it != memo_.end()) return it->second;
    Instr in;
    switch (f.kind()) {
      case Formula::Kind::var: {
        auto it = slot_.find(f.var());
        if (it == slot_.end()) throw DomainError("no valuation for " + to_string(f.var()));
        in.code = Code::var;
        in.arg = it->second;
        break;
      }
      case Formula::Kind::dia:
      case Formula::Kind::box:
        in.code = f.kind() == Formula::Kind::dia ? Code::dia : Code::box;
        in.kids.push_back(compile(f.child()));
        break;
      case Formula::Kind::op: {
        auto const& name = f.op_name();
        auto arity = f.args().size();
        for (auto const& a : f.args()) in.kids.push_back(compile(a));
        if (name == "and" && arity == 2) {
          in.code = Code::meet;
        } else if (name == "or" && arity == 2) {
          in.code = Code::join;
        } else if (name == "top" && arity == 0) {
          in.code = Code::constant;
          in.arg = alg_->top();
        } else if (name == "bot" && arity == 0) {
          in.code = Code::constant;
          in.arg = alg_->bottom();
        } else {
          auto const& o = alg_->op(name);
          if (o.arity != arity) {
            throw SignatureError("operation '" + name + "' expects " +
                                 std::to_string(o.arity) + " arguments");
          }
          if (arity == 0) {
            in.code = Code::constant;
            in.arg = o.table.at(0);
          } else {
            in.code = Code::table;
            in.op = &o;
          }
        }
        break;
      }
    }
    auto idx = static_cast<std::uint32_t>(code_.size());
    code_.push_back(std::move(in));
    memo_.emplace(f.id(), idx);
    return idx;
  }

  LatticeAlgebra const* alg_;
  std::map<Var, std::uint32_t> slot_;
  std::vector<Instr> code_;
  std::vector<std::uint32_t> roots_;
  std::unordered_map<void const*, std::uint32_t> memo_;
};

namespace detail {
inline std::vector<element> flat_valuation(Model const& M, std::vector<Var> const& vars) {
  std::size_t n = M.frame.size();
  std::vector<element> val(vars.size() * n);
  for (std::size_t i = 0; i < vars.size(); ++i) {
    for (world w = 0; w < n; ++w) val[i * n + w] = M.value(vars[i], w);
  }
  return val;
}
}  // namespace detail

/// ⟦f⟧ at every world.
inline std::vector<element> eval_all(Model const& M, Formula const& f) {
  auto vs = variables(f);
  std::vector<Var> vars(vs.begin(), vs.end());
  CompiledFormula cf(*M.algebra, {f}, vars);
  std::vector<element> buf;
  cf.run(M.frame, detail::flat_valuation(M, vars), buf);
  std::vector<element> out(M.frame.size());
  for (world w = 0; w < out.size(); ++w) out[w] = cf.value(buf, 0, out.size(), w);
  return out;
}

/// ⟦f⟧^M_w.
inline element eval(Model const& M, Formula const& f, world w) {
  if (w >= M.frame.size()) throw DomainError("world " + std::to_string(w) + " out of range");
  return eval_all(M, f)[w];
}

inline bool globally_true(Model const& M, Formula const& f) {
  for (element e : eval_all(M, f)) {
    if (e != M.algebra->top()) return false;
  }
  return true;
}

/// Default enumeration budget: $MVML_BUDGET if set, else 10^7.
inline std::uint64_t default_budget() {
  if (char const* s = std::getenv("MVML_BUDGET")) {
    char* end = nullptr;
    auto v = std::strtoull(s, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 10'000'000;
}

enum class Backend { automatic, enumerate, sat };

struct CheckOptions {
  std::uint64_t budget = default_budget();
  Backend backend = Backend::automatic;
  unsigned workers = 1;
};

/// Outcome of a validity or consequence check on one frame.
struct Verdict {
  bool holds = true;
  /// A refuting model (premises globally true, conclusion not) when !holds.
  std::optional<Model> counterexample;
  world failing_world = 0;
  std::uint64_t valuations = 0;  // number examined (enumeration only)
};

/// |A|^(vars * worlds), or nullopt if it does not fit in 64 bits.
inline std::optional<std::uint64_t> valuation_count(std::size_t k, std::size_t vars,
                                                    std::size_t worlds) {
  std::uint64_t c = 1;
  for (std::size_t i = 0; i < vars * worlds; ++i) {
    if (c > std::numeric_limits<std::uint64_t>::max() / k) return std::nullopt;
    c *= k;
  }
  return c;
}

namespace detail {

inline void require_budget(std::size_t k, std::size_t vars, std::size_t worlds,
                           std::uint64_t budget) {
  auto c = valuation_count(k, vars, worlds);
  if (!c || *c > budget) {
    std::string need = std::to_string(k) + "^" + std::to_string(vars * worlds);
    if (c) need += " = " + std::to_string(*c);
    throw ResourceError("enumeration needs " + need + " valuations, budget is " +
                        std::to_string(budget));
  }
}

// Scans valuations with index in [lo, hi) of the mixed-radix order.
struct Scan {
  std::optional<std::uint64_t> first_bad;
  world failing_world = 0;
  std::uint64_t examined = 0;
};

inline Scan scan_range(Frame const& F, LatticeAlgebra const& A, CompiledFormula const& cf,
                       std::size_t nvars, std::uint64_t lo, std::uint64_t hi) {
  std::size_t const n = F.size();
  std::size_t const digits = nvars * n;
  std::size_t const k = A.size();
  std::size_t const premises = cf.root_count() - 1;
  std::vector<element> val(digits, 0);
  std::uint64_t r = lo;
  for (std::size_t d = digits; d-- > 0;) {
    val[d] = static_cast<element>(r % k);
    r /= k;
  }
  std::vector<element> buf;
  Scan s;
  for (std::uint64_t idx = lo; idx < hi; ++idx) {
    ++s.examined;
    cf.run(F, val, buf);
    bool premises_hold = true;
    for (std::size_t p = 0; p < premises && premises_hold; ++p) {
      for (world w = 0; w < n; ++w) {
        if (cf.value(buf, p, n, w) != A.top()) {
          premises_hold = false;
          break;
        }
      }
    }
    if (premises_hold) {
      for (world w = 0; w < n; ++w) {
        if (cf.value(buf, premises, n, w) != A.top()) {
          s.first_bad = idx;
          s.failing_world = w;
          return s;
        }
      }
    }
    for (std::size_t d = digits; d-- > 0;) {
      if (++val[d] < k) break;
      val[d] = 0;
    }
  }
  return s;
}

inline Valuation decode_valuation(std::vector<Var> const& vars, std::size_t n, std::size_t k,
                                  std::uint64_t idx) {
  Valuation v;
  for (auto const& x : vars) v[x].assign(n, 0);
  for (std::size_t d = vars.size() * n; d-- > 0;) {
    v[vars[d / n]][d % n] = static_cast<element>(idx % k);
    idx /= k;
  }
  return v;
}

}  // namespace detail

/// Exhaustive check of Γ ⊨ f on one frame by valuation enumeration. The
/// first refuting valuation in the mixed-radix order over (letter, world)
/// pairs is reported; with several workers the order is preserved.
inline Verdict enumerate_consequence(Frame const& F, LatticeAlgebra const& A,
                                     std::span<Formula const> premises, Formula const& f,
                                     CheckOptions const& opt) {
  std::vector<Formula> roots(premises.begin(), premises.end());
  roots.push_back(f);
  auto vs = variables(std::span<Formula const>(roots));
  std::vector<Var> vars(vs.begin(), vs.end());
  std::size_t const n = F.size();
  detail::require_budget(A.size(), vars.size(), n, opt.budget);
  std::uint64_t total = *valuation_count(A.size(), vars.size(), n);
  CompiledFormula cf(A, roots, vars);

  detail::Scan best;
  unsigned workers = std::max(1U, opt.workers);
  if (workers == 1 || total < 4096) {
    best = detail::scan_range(F, A, cf, vars.size(), 0, total);
  } else {
    std::vector<detail::Scan> parts(workers);
    std::vector<std::thread> pool;
    std::uint64_t chunk = (total + workers - 1) / workers;
    for (unsigned i = 0; i < workers; ++i) {
      std::uint64_t lo = std::min(total, i * chunk), hi = std::min(total, lo + chunk);
      pool.emplace_back([&, i, lo, hi] {
        parts[i] = detail::scan_range(F, A, cf, vars.size(), lo, hi);
      });
    }
    for (auto& t : pool) t.join();
    for (auto const& s : parts) {
      best.examined += s.examined;
      if (s.first_bad && !best.first_bad) {
        best.first_bad = s.first_bad;
        best.failing_world = s.failing_world;
      }
    }
  }

  Verdict v;
  v.valuations = best.examined;
  if (best.first_bad) {
    v.holds = false;
    v.failing_world = best.failing_world;
    v.counterexample.emplace(F, std::make_shared<LatticeAlgebra const>(A),
                             detail::decode_valuation(vars, n, A.size(), *best.first_bad));
  }
  return v;
}

}  // namespace mvml
