#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "vekua/group_spectrum.hpp"
#include "vekua/mode_system.hpp"

namespace vekua {

/// A0 = s0 + i delta q0, B0 = alpha q0; per mode mu.C0 = 2 pi b + i a q0.
struct GlobalConstants {
  Complex A0;
  Complex B0;
  double s0 = 0.0;
  double q0 = 0.0;
  double delta = 0.0;
  Complex alpha;
  Eigen::VectorXd lambda;
  Eigen::VectorXd p0;

  Complex mode_C(const ModeScalars& s) const { return {2.0 * M_PI * s.b, s.a * q0}; }
};

GlobalConstants global_constants(const VekuaParams& params);

/// s0 below this magnitude counts as zero when picking a case.
inline constexpr double kZeroS0 = 1e-12;
/// Relative tolerance of the resonance residual predicate.
inline constexpr double kResonanceTolerance = 1e-9;
/// Diophantine quantities below this are rounding noise of an exact zero.
inline constexpr double kDiophantineZero = 1e-12;

struct ResonanceResiduals {
  double r1 = 0.0;  // 2 pi s0 (k + b) + delta a q0^2
  double r2 = 0.0;  // (2 pi (k + b))^2 + a^2 q0^2 - (|A0|^2 - |B0|^2)
  bool hit = false;
};

ResonanceResiduals resonance_residuals(const GlobalConstants& c, const ModeScalars& s, long k);

struct ResonanceHit {
  std::size_t spectrum_index = 0;
  double a = 0.0;
  double b = 0.0;
  long k = 0;
  double r1 = 0.0;
  double r2 = 0.0;
  /// Distance from the real quadratic root to k (analytic path; 0 for brute force).
  double root_distance = 0.0;

  auto key() const { return std::pair{spectrum_index, k}; }
};

/// Solves the second equation for k + b and tests the integer neighbours of both roots.
/// No bound on k.
std::vector<ResonanceHit> find_resonances_analytic(const GlobalConstants& c,
                                                   const std::vector<ModeScalars>& spectrum);

std::vector<ResonanceHit> find_resonances_bruteforce(const GlobalConstants& c,
                                                     const std::vector<ModeScalars>& spectrum,
                                                     long k_bound);

struct ResonanceSearch {
  std::vector<ResonanceHit> hits;  // analytic hits, sorted by (index, k)
  long k_bound = 0;
  /// Analytic hits with |k| <= k_bound equal the brute-force hit set.
  bool paths_agree = true;
  std::size_t bruteforce_count = 0;
};

ResonanceSearch find_resonances(const GlobalConstants& c, const std::vector<ModeScalars>& spectrum,
                                long k_bound);

/// Residues of p0.mu mod 1 over the whole unitary dual, when every generator
/// (p0_j for a circle, p0_j / 2 for SU(2)) is rational with a small denominator.
std::optional<std::vector<double>> b_residues(const GroupModel& model);

enum class DiophantineKind { DC, DCPrime, III };

std::string to_string(DiophantineKind kind);

struct WeightRow {
  double weight = 0.0;
  double min_value = 0.0;
  std::size_t argmin = 0;  // position in the scanned spectrum
};

struct DiophantineWitness {
  ModeIndex mode;
  double weight = 0.0;
  double value = 0.0;
  double bound = 0.0;  // weight^{-M}
};

struct DiophantineReport {
  DiophantineKind kind = DiophantineKind::III;
  Truncation truncation;
  double M = 0.0;
  std::vector<WeightRow> rows;  // ascending weight
  /// Least-squares fit of log(min) ~ -M_hat log(weight) over weights >= M; unset when
  /// fewer than two usable rows.
  std::optional<double> M_hat;
  double fit_residual = 0.0;
  bool holds = true;  // no violation up to the truncation
  std::optional<DiophantineWitness> witness;
  /// True when the verdict extends to the whole dual (violations always do; "holds"
  /// needs the residue-class minimum to clear the bound beyond the truncation).
  bool certified = false;
  /// Infimum of the quantity over the whole dual, when it reduces to residue classes.
  std::optional<double> residue_min;
  std::string note;
};

/// Quantity per mode: DC 2 pi dist((2 pi b - q0 omega) / 2 pi, Z); DC' |e^{i(2 pi b - q0 omega)} - 1|;
/// III min(|D1|, |D2|). DC and DC' require |alpha| < |delta| and s0 = 0 (InvalidParameters otherwise).
DiophantineReport diophantine_check(const VekuaParams& params, const Truncation& truncation,
                                    DiophantineKind kind, double M);

struct DcEquivalenceReport {
  DiophantineReport dc;
  DiophantineReport dc_prime;
  /// max | |e^{i theta} - 1|^2 - 2 (1 - cos theta) | over the scanned modes.
  double identity_residual = 0.0;
  /// Largest violation of (2/pi) d <= |e^{i theta} - 1| <= d (0 when both hold).
  double bound_violation = 0.0;
  /// M' >= M with M'^{M' - M} >= pi/2, so DC(M) implies DC'(M').
  double M_shifted = 0.0;
  bool dc_prime_at_shifted = false;
  bool dc_prime_implies_dc = true;
  bool dc_implies_dc_prime_shifted = true;
  std::vector<double> ladder;
  bool dc_exists_on_ladder = false;
  bool dc_prime_exists_on_ladder = false;
  bool agree = true;
};

DcEquivalenceReport dc_prime_equivalence(const VekuaParams& params, const Truncation& truncation,
                                         double M);

struct Lambda0Classification {
  int case_number = 0;
  bool solvable = false;
  /// The verdict holds on the whole dual, not only up to the truncation.
  bool certified = false;
  std::string verdict;
  GlobalConstants constants;
  std::optional<ResonanceSearch> resonances;
  std::optional<DiophantineReport> diophantine;
};

/// Case analysis for lambda = 0. Throws HypothesisViolation when |alpha| = |delta| and
/// InvalidParameters when some lambda_j != 0.
Lambda0Classification classify_lambda0(const VekuaParams& params, const Truncation& truncation,
                                       long k_bound, double M);

}  // namespace vekua
