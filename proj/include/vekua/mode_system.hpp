#pragma once

#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Core>

#include "vekua/fourier_series.hpp"
#include "vekua/group_spectrum.hpp"
#include "vekua/trig_poly.hpp"

namespace vekua {

using Complex = std::complex<double>;

/// Operator data for P u = du/dt - sum_j (p_j(t) + i lambda_j q) X_j u - (s + i delta q) u - alpha q conj(u).
///
/// `drift` is optional: empty means the normal form p_j = group.p0[j]. When present it holds
/// one full p_j(t) per factor and its means must agree with group.p0.
struct VekuaParams {
  GroupModel group;
  double delta = 0.0;
  Complex alpha{1.0, 0.0};
  TrigPoly s;
  TrigPoly q = TrigPoly::constant(1.0);
  std::vector<TrigPoly> drift;
};

/// Throws InvalidParameters (alpha = 0, bad q, inconsistent drift, bad model).
void validate(const VekuaParams& params);

/// True when |alpha| = |delta| to relative precision 1e-12 (hypothesis (I) fails).
bool violates_hypothesis_one(const VekuaParams& params);

struct OperatorConstants {
  double delta = 0.0;
  Complex alpha{1.0, 0.0};
  double s0 = 0.0;
  double q0 = 0.0;
};

OperatorConstants operator_constants(const VekuaParams& params);

/// sqrt((a - i delta)^2 + |alpha|^2) with Re >= 0; ties on the imaginary axis take Im >= 0.
Complex rho_branch(double a, double delta, Complex alpha);

/// The mode matrix [[-(a - i delta), alpha], [conj(alpha), a - i delta]].
Eigen::Matrix2cd mode_matrix(double a, double delta, Complex alpha);

struct ModeSystem {
  double a = 0.0;
  double b = 0.0;
  Complex rho;
  Eigen::Matrix2cd T;
  Eigen::Matrix2cd Tinv;
  Complex D1;
  Complex D2;
  double s0 = 0.0;
  double q0 = 0.0;
  Complex alpha;
  double delta = 0.0;

  /// c = s0 + 2 pi i b, so the boundary condition reads z(0) = e^c z(2 pi).
  Complex twist() const { return {s0, 2.0 * M_PI * b}; }
  Eigen::Matrix2cd Mtilde() const { return mode_matrix(a, delta, alpha); }
};

/// Resonance threshold 1e-14 (1 + e^{s0}) on |D1|, |D2|.
double resonance_tolerance(double s0);

struct Denominators {
  Complex D1;
  Complex D2;
};

/// D1 = e^{-rho q0} - e^{c}, D2 = 1 - e^{-rho q0 + c}; never throws.
Denominators boundary_denominators(const OperatorConstants& constants, const ModeScalars& scalars);

/// Throws DegenerateRho when rho = 0 and, if check_resonance, ResonantMode
/// (with an empty mode label) when a denominator falls below resonance_tolerance.
ModeSystem build_mode_system(const OperatorConstants& constants, const ModeScalars& scalars,
                             bool check_resonance = true);
ModeSystem build_mode_system(const VekuaParams& params, const ModeScalars& scalars);

/// Q and S primitives plus the bounds the quadrature refinement needs.
struct TimeIntegrals {
  QWeights q;
  SplitAntiderivative S;
  double s0 = 0.0;
  double q_sup = 0.0;
  double s_sup = 0.0;
};

TimeIntegrals time_integrals(const VekuaParams& params);

/// Gauss-Legendre panels (5 nodes each) on `subpanels` pieces of every grid interval,
/// with Q and S tabulated at the nodes and at the grid points.
struct QuadratureGrid {
  int nt = 0;
  int subpanels = 1;
  Eigen::VectorXd t;        // nt + 1 grid points
  Eigen::VectorXd Q_grid;   // Q at grid points
  Eigen::VectorXd S_grid;
  Eigen::VectorXd nodes;    // nt * subpanels * 5
  Eigen::VectorXd weights;
  Eigen::VectorXd Q_nodes;
  Eigen::VectorXd S_nodes;

  int nodes_per_interval() const { return 5 * subpanels; }
};

QuadratureGrid make_quadrature_grid(const TimeIntegrals& integrals, int nt, int subpanels);

/// Sub-panels per grid interval needed to resolve the mode's oscillation,
/// keeping (panel width) x (local frequency) <= 1.
int required_subpanels(const ModeSystem& system, const TimeIntegrals& integrals, int nt,
                       int forcing_degree);

struct ModeSolution {
  Eigen::VectorXd grid;
  Eigen::VectorXcd z1;
  Eigen::VectorXcd z2;
  Complex K1;
  Complex K2;
  Eigen::VectorXcd w1;  // u-hat samples
  Eigen::VectorXcd w2;  // samples of the conjugate-function coefficient
  /// Largest real part among all rho-exponent arguments evaluated (stability contract).
  double max_exponent_real = -std::numeric_limits<double>::infinity();
};

/// Closed-form twisted-boundary solve of the decoupled system
/// z1' = rho q z1 + e^{-ibt - S} G1, z2' = -rho q z2 + e^{-ibt - S} G2, z(0) = e^c z(2 pi),
/// using the forward/backward recurrences whose exponents all have nonpositive real part.
/// Throws QuadratureFailure on non-finite output.
ModeSolution solve_mode(const ModeSystem& system, const ComplexSeries& G1, const ComplexSeries& G2,
                        const QuadratureGrid& grid);

/// Same solve with G1, G2 given as values at grid.nodes.
ModeSolution solve_mode(const ModeSystem& system, const Eigen::VectorXcd& G1_nodes,
                        const Eigen::VectorXcd& G2_nodes, const QuadratureGrid& grid);

/// Maximum of |z(0) - e^c z(2 pi)| over both components.
double twisted_boundary_residual(const ModeSystem& system, const ModeSolution& solution);

}  // namespace vekua
