#pragma once

#include <map>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "vekua/fourier_series.hpp"
#include "vekua/group_spectrum.hpp"
#include "vekua/mode_system.hpp"

namespace vekua {

/// nt + 1 values on t_j = 2 pi j / nt.
using SampledProfile = Eigen::VectorXcd;
using TimeProfile = std::variant<ComplexSeries, SampledProfile>;

inline bool is_series(const TimeProfile& p) { return std::holds_alternative<ComplexSeries>(p); }

/// Samples on the nt grid; throws std::invalid_argument on a length mismatch.
SampledProfile sample_profile(const TimeProfile& p, int nt);

/// Partial Fourier coefficients f-hat(t, xi)_{mn}. Sparse: an absent mode is zero.
struct CoefficientField {
  Truncation truncation;
  int nt = 256;
  std::map<ModeIndex, TimeProfile> modes;

  bool all_series() const;
};

/// Keys admissible and inside the truncation, sample lengths nt + 1.
void validate(const GroupModel& model, const CoefficientField& field);

/// Coefficients of the complex conjugate function. Throws TruncationAsymmetry when the
/// conjugate of a mode falls outside the truncation.
CoefficientField conjugate_field(const GroupModel& model, const CoefficientField& field);

/// (f-hat, g-hat) with g = conj(f).
struct PairedField {
  CoefficientField primal;
  CoefficientField conj;
};

PairedField pair_with_conjugate(const GroupModel& model, const CoefficientField& primal);

/// max |conj[xi] - conjugate_field(primal)[xi]| over modes and grid samples.
double pairing_residual(const GroupModel& model, const PairedField& field);

/// Throws InconsistentField when pairing_residual exceeds tol.
void check_paired(const GroupModel& model, const PairedField& field, double tol = 1e-12);

CoefficientField sampled(const CoefficientField& field);

/// c1 f + c2 g with real scalars; stays a series when both inputs are.
CoefficientField linear_combination(double c1, const CoefficientField& f, double c2,
                                    const CoefficientField& g);
PairedField linear_combination(double c1, const PairedField& f, double c2, const PairedField& g);

/// Max sample difference over the union of modes (absent = zero).
double max_abs_difference(const CoefficientField& f, const CoefficientField& g);
double max_abs_difference(const PairedField& f, const PairedField& g);

enum class PsiDirection { Forward, Inverse };

/// sum_j mu_j P_j(t), P_j(t) = int_0^t p_j - p0_j t. Empty drift gives 0.
double drift_phase(const std::vector<TrigPoly>& drift, const Eigen::VectorXd& mu, double t);

/// Multiplies each profile by e^{-i mu.P(t)} (forward) or e^{+i mu.P(t)} (inverse).
/// Output is sampled on the field's grid.
CoefficientField psi_conjugation(const GroupModel& model, const CoefficientField& field,
                                 const std::vector<TrigPoly>& drift, PsiDirection direction);
PairedField psi_conjugation(const GroupModel& model, const PairedField& field,
                            const std::vector<TrigPoly>& drift, PsiDirection direction);

/// Coefficient-space P (with params.drift when present): exact for series profiles,
/// spectral differentiation in t for sampled ones.
PairedField apply_P(const VekuaParams& params, const PairedField& u);

}  // namespace vekua
