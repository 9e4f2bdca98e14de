#pragma once

#include <complex>
#include <compare>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

namespace vekua {

enum class FactorKind { Circle, SU2 };

struct GroupFactor {
  FactorKind kind = FactorKind::Circle;
};

/// G = G_1 x ... x G_n with one normalized vector field X_j per factor.
/// lambda[j] and p0[j] are the per-factor coefficients of X_j in the operator.
struct GroupModel {
  std::vector<GroupFactor> factors;
  std::vector<double> lambda;
  std::vector<double> p0;

  std::size_t size() const noexcept { return factors.size(); }
};

/// Throws InvalidParameters when the model is empty or the vectors disagree in length.
void validate(const GroupModel& model);

struct CircleMode {
  int k = 0;
  auto operator<=>(const CircleMode&) const = default;
};

/// Matrix coefficient (m, n) of the spin-l representation; all three stored doubled.
struct Su2Mode {
  int two_l = 0;
  int two_m = 0;
  int two_n = 0;
  auto operator<=>(const Su2Mode&) const = default;
};

using FactorMode = std::variant<CircleMode, Su2Mode>;

struct ModeIndex {
  std::vector<FactorMode> entries;
  auto operator<=>(const ModeIndex&) const = default;
};

std::string to_string(const ModeIndex& mode);

/// Per-factor truncation: Circle -> max |k|, SU2 -> max 2l.
using Truncation = std::vector<int>;

/// Spectral scalars of one mode. mu holds the per-factor eigenvalues of sigma_{iX_j}.
struct ModeScalars {
  double a = 0.0;       // lambda . mu
  double b = 0.0;       // p0 . mu
  double weight = 1.0;  // <xi>
  Eigen::VectorXd mu;
};

bool is_admissible(const GroupModel& model, const ModeIndex& mode);

/// Every (k | l, m, n) inside the truncation, in ascending ModeIndex order.
std::vector<ModeIndex> enumerate_modes(const GroupModel& model, const Truncation& truncation);

/// One representative per distinct (mu, weight): the column index n is pinned to m.
/// The solvability conditions only see mu and <xi>, so this is what they scan.
std::vector<ModeIndex> enumerate_spectrum(const GroupModel& model, const Truncation& truncation);

ModeScalars mode_scalars(const GroupModel& model, const ModeIndex& mode);
std::vector<ModeScalars> mode_scalars(const GroupModel& model, const std::vector<ModeIndex>& modes);

struct ConjugateMode {
  ModeIndex mode;
  std::complex<double> phase{1.0, 0.0};
};

/// Index of conj(xi) and the phase with conj(xi_{nm}) = phase * conj(xi)_{n'm'}.
ConjugateMode conjugate_mode(const GroupModel& model, const ModeIndex& mode);

/// Bound check used for the ModeIndex / truncation relationship.
bool within_truncation(const GroupModel& model, const Truncation& truncation, const ModeIndex& mode);

}  // namespace vekua
