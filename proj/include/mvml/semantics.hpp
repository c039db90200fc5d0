#pragma once

#include <span>

#include "mvml/classical.hpp"
#include "mvml/evaluation.hpp"

namespace mvml {

/// Γ ⊨ f on one frame. Two-valued instances go to the SAT backend unless
/// enumeration is requested; everything else is enumerated.
inline Verdict check_consequence(Frame const& F, LatticeAlgebra const& A,
                                 std::span<Formula const> premises, Formula const& f,
                                 CheckOptions const& opt = {}) {
  bool use_sat = opt.backend == Backend::sat ||
                 (opt.backend == Backend::automatic && A.size() == 2);
  if (use_sat) return sat_consequence(F, A, premises, f);
  return enumerate_consequence(F, A, premises, f, opt);
}

/// 𝔉 ⊨_A f.
inline bool frame_validates(Frame const& F, LatticeAlgebra const& A, Formula const& f,
                            CheckOptions const& opt = {}) {
  return check_consequence(F, A, {}, f, opt).holds;
}

/// Γ ⊨ f in Log(𝔽, A): holds on every listed frame.
inline bool consequence_on_frames(std::span<Frame const> frames, LatticeAlgebra const& A,
                                  std::span<Formula const> premises, Formula const& f,
                                  CheckOptions const& opt = {}) {
  for (auto const& F : frames) {
    if (!check_consequence(F, A, premises, f, opt).holds) return false;
  }
  return true;
}

}  // namespace mvml
