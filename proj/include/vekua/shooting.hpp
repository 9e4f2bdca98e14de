#pragma once

#include <functional>

#include <Eigen/Core>

#include "vekua/mode_system.hpp"

namespace vekua {

using MatrixField = std::function<Eigen::Matrix2cd(double)>;
using ForcingField = std::function<Eigen::Vector2cd(double)>;

struct ShootingResult {
  Eigen::VectorXcd w1;
  Eigen::VectorXcd w2;
  Eigen::Matrix2cd monodromy;
  Complex det_I_minus_monodromy;
  int steps = 0;
};

/// det(I - Phi(2 pi)) below this is reported as SingularMonodromy.
inline constexpr double kSingularMonodromyTolerance = 1e-8;

/// Periodic solution of w' = M(t) w + F(t) by classical RK4 with `substeps` steps per
/// grid interval: fundamental matrix over one period, then (I - Phi) w(0) = w_particular(2 pi).
/// Throws SingularMonodromy when |det(I - Phi)| < kSingularMonodromyTolerance.
ShootingResult oracle_shooting(const MatrixField& M, const ForcingField& F, int nt, int substeps);

/// M(t) of the mode system: diagonal (i mu.p(t) + s) plus q(t) times the mode matrix.
/// Uses params.drift when present, otherwise the constant p0.
MatrixField vekua_mode_matrix(const VekuaParams& params, const ModeScalars& scalars);

/// Convenience overload for the (f-hat, conjugate-coefficient) pair of one mode.
/// Picks substeps so that (step) x sup|M| <= 0.02.
ShootingResult oracle_shooting(const VekuaParams& params, const ModeScalars& scalars,
                               const ComplexSeries& F1, const ComplexSeries& F2, int nt);

}  // namespace vekua
