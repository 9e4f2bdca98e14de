#include "vekua/shooting.hpp"

#include <cmath>

#include <Eigen/LU>

#include "vekua/errors.hpp"

namespace vekua {

namespace {

template <typename State, typename Rhs>
State rk4_step(const Rhs& rhs, double t, const State& y, double h) {
  const State k1 = rhs(t, y);
  const State k2 = rhs(t + 0.5 * h, State(y + 0.5 * h * k1));
  const State k3 = rhs(t + 0.5 * h, State(y + 0.5 * h * k2));
  const State k4 = rhs(t + h, State(y + h * k3));
  return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

ShootingResult oracle_shooting(const MatrixField& M, const ForcingField& F, int nt, int substeps) {
  const int steps = nt * substeps;
  const double h = 2.0 * M_PI / steps;

  // Columns 0, 1: fundamental matrix; column 2: particular solution from w(0) = 0.
  using State = Eigen::Matrix<Complex, 2, 3>;
  auto rhs = [&](double t, const State& y) {
    State dy = M(t) * y;
    dy.col(2) += F(t);
    return dy;
  };
  State y = State::Zero();
  y.leftCols<2>().setIdentity();
  for (int i = 0; i < steps; ++i) y = rk4_step(rhs, i * h, y, h);

  ShootingResult out;
  out.steps = steps;
  out.monodromy = y.leftCols<2>();
  const Eigen::Matrix2cd A = Eigen::Matrix2cd::Identity() - out.monodromy;
  out.det_I_minus_monodromy = A.determinant();
  if (std::abs(out.det_I_minus_monodromy) < kSingularMonodromyTolerance)
    throw SingularMonodromy("I - Phi(2 pi) is singular: |det| = " +
                                std::to_string(std::abs(out.det_I_minus_monodromy)),
                            std::abs(out.det_I_minus_monodromy));
  const Eigen::Vector2cd w0 = A.partialPivLu().solve(Eigen::Vector2cd(y.col(2)));

  using Vec = Eigen::Vector2cd;
  auto rhs_w = [&](double t, const Vec& w) -> Vec { return M(t) * w + F(t); };
  out.w1.resize(nt + 1);
  out.w2.resize(nt + 1);
  Vec w = w0;
  out.w1[0] = w[0];
  out.w2[0] = w[1];
  for (int j = 0; j < nt; ++j) {
    for (int s = 0; s < substeps; ++s) w = rk4_step(rhs_w, (j * substeps + s) * h, w, h);
    out.w1[j + 1] = w[0];
    out.w2[j + 1] = w[1];
  }
  return out;
}

MatrixField vekua_mode_matrix(const VekuaParams& params, const ModeScalars& scalars) {
  const Eigen::Matrix2cd mtilde = mode_matrix(scalars.a, params.delta, params.alpha);
  const TrigPoly s = params.s;
  const TrigPoly q = params.q;
  const std::vector<TrigPoly> drift = params.drift;
  const Eigen::VectorXd mu = scalars.mu;
  const double b = scalars.b;
  return [=](double t) {
    double mu_p = b;
    if (!drift.empty()) {
      mu_p = 0.0;
      for (Eigen::Index j = 0; j < mu.size(); ++j) mu_p += mu[j] * drift[static_cast<std::size_t>(j)](t);
    }
    Eigen::Matrix2cd m = q(t) * mtilde;
    m.diagonal().array() += Complex(s(t), mu_p);
    return m;
  };
}

ShootingResult oracle_shooting(const VekuaParams& params, const ModeScalars& scalars,
                               const ComplexSeries& F1, const ComplexSeries& F2, int nt) {
  double drift_sup = std::abs(scalars.b);
  if (!params.drift.empty()) {
    drift_sup = 0.0;
    for (Eigen::Index j = 0; j < scalars.mu.size(); ++j)
      drift_sup += std::abs(scalars.mu[j]) * params.drift[static_cast<std::size_t>(j)].abs_bound();
  }
  const double sup_m = drift_sup + params.s.abs_bound() + std::max(F1.degree(), F2.degree()) +
                       params.q.abs_bound() * mode_matrix(scalars.a, params.delta, params.alpha).norm();
  const double interval = 2.0 * M_PI / nt;
  const int substeps = std::max(1, static_cast<int>(std::ceil(interval * sup_m / 0.02)));
  auto forcing = [&](double t) { return Eigen::Vector2cd(F1(t), F2(t)); };
  return oracle_shooting(vekua_mode_matrix(params, scalars), forcing, nt, substeps);
}

}  // namespace vekua
