#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vekua/decay.hpp"
#include "vekua/field.hpp"
#include "vekua/mode_system.hpp"

namespace vekua {

struct SolveOptions {
  unsigned threads = 0;  // 0 = hardware concurrency
  int max_subpanels = 64;
  int fixed_subpanels = 0;  // > 0 overrides the adaptive choice
  double pairing_tolerance = 1e-12;
  bool emit_fit = false;  // also return a degree nt/2 - 1 least-squares series fit
  std::vector<int> decay_orders{0, 1, 2};
};

struct ModeReport {
  ModeIndex mode;
  double weight = 0.0;
  double abs_D1 = 0.0;
  double abs_D2 = 0.0;
  int subpanels = 1;
  double max_exponent_real = 0.0;
  double boundary_residual = 0.0;
};

struct SolveReport {
  PairedField solution;  // sampled on the nt grid
  std::optional<PairedField> fit;
  double residual_max = 0.0;  // apply_P(solution) - f, spectral differentiation
  double residual_l2 = 0.0;   // root mean square over modes and samples
  double pairing_residual = 0.0;
  double max_exponent_real = -std::numeric_limits<double>::infinity();
  std::vector<ModeReport> modes;  // ascending mode index
  DecayDiagnostic decay;
  std::vector<std::string> resonant_modes;
};

/// Solves P u = f mode by mode. Checks hypothesis (I) (HypothesisViolation) and the pairing
/// of f (InconsistentField); a resonant mode aborts with ResonantMode naming it.
/// A drift p_j(t) in params is handled through the normal-form conjugation.
SolveReport solve_field(const VekuaParams& params, const PairedField& f,
                        const SolveOptions& options = {});

/// Builds the conjugate half with conjugate_field first.
SolveReport solve_field(const VekuaParams& params, const CoefficientField& f,
                        const SolveOptions& options = {});

}  // namespace vekua
