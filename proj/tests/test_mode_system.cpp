#include <cmath>
#include <random>

#include <Eigen/LU>

#include "doctest.h"
#include "test_support.hpp"
#include "vekua/errors.hpp"
#include "vekua/mode_system.hpp"
#include "vekua/shooting.hpp"

using namespace vekua;

namespace {

VekuaParams circle_params(double lambda, double p0, double delta, Complex alpha, TrigPoly s,
                          TrigPoly q = TrigPoly::constant(1.0)) {
  VekuaParams p;
  p.group = {{{FactorKind::Circle}}, {lambda}, {p0}};
  p.delta = delta;
  p.alpha = alpha;
  p.s = std::move(s);
  p.q = std::move(q);
  return p;
}

ModeScalars scalars_ab(double a, double b) {
  ModeScalars s;
  s.a = a;
  s.b = b;
  s.weight = 1.0;
  s.mu = Eigen::VectorXd::Ones(1);
  return s;
}

// G = p' - (ib + s) p - sign * rho q p makes z = e^{-ibt - S} p the exact twisted solution.
ComplexSeries manufactured_forcing(const ComplexSeries& p, const VekuaParams& params, double b,
                                   Complex rho_signed) {
  const ComplexSeries s = params.s.to_series();
  const ComplexSeries q = params.q.to_series();
  return derivative(p) - (ComplexSeries::constant(Complex(0, b)) + s) * p - rho_signed * (q * p);
}

double manufactured_error(const ModeSolution& sol, const TimeIntegrals& ti, const ComplexSeries& p1,
                          const ComplexSeries& p2, double b) {
  double err = 0.0;
  for (Eigen::Index j = 0; j < sol.grid.size(); ++j) {
    const double t = sol.grid[j];
    const Complex e = std::exp(Complex(-ti.S(t), -b * t));
    err = std::max(err, std::abs(sol.z1[j] - e * p1(t)));
    err = std::max(err, std::abs(sol.z2[j] - e * p2(t)));
  }
  return err;
}

}  // namespace

TEST_CASE("rho branch") {
  const Complex r = rho_branch(0.0, 2.0, 1.0);
  CHECK(std::abs(r - Complex(0.0, std::sqrt(3.0))) < 1e-15);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 200; ++i) {
    const double a = u(rng), d = u(rng);
    const Complex al(u(rng), u(rng));
    const Complex rho = rho_branch(a, d, al);
    const Complex c(a, -d);
    CHECK(std::abs(rho * rho - (c * c + std::norm(al))) < 1e-12);
    CHECK(rho.real() >= 0.0);
    // Eigenvalues of the mode matrix are +-rho.
    const Eigen::Matrix2cd m = mode_matrix(a, d, al);
    CHECK(std::abs(m.trace()) < 1e-14);
    CHECK(std::abs(m.determinant() + rho * rho) < 1e-12);
  }
}

TEST_CASE("mode system example denominators") {
  OperatorConstants k{0.0, 1.0, 0.0, 2 * M_PI};
  const ModeSystem sys = build_mode_system(k, scalars_ab(0.0, 0.0));
  CHECK(std::abs(sys.rho - 1.0) < 1e-15);
  CHECK(std::abs(sys.D1 - (std::exp(-2 * M_PI) - 1.0)) < 1e-15);
  CHECK(std::abs(sys.D2 - (1.0 - std::exp(-2 * M_PI))) < 1e-15);
  CHECK((sys.T * sys.Tinv - Eigen::Matrix2cd::Identity()).norm() < 1e-14);
  const Eigen::Matrix2cd diag = sys.Tinv * sys.Mtilde() * sys.T;
  CHECK(std::abs(diag(0, 0) - sys.rho) < 1e-14);
  CHECK(std::abs(diag(1, 1) + sys.rho) < 1e-14);
  CHECK(std::abs(diag(0, 1)) < 1e-14);
}

TEST_CASE("resonant mode is rejected") {
  // rho = i, q0 = 2 pi, s0 = 0, b = 0 gives e^{-rho q0} = 1 = e^c.
  OperatorConstants k{std::sqrt(2.0), 1.0, 0.0, 2 * M_PI};
  CHECK_THROWS_AS(build_mode_system(k, scalars_ab(0.0, 0.0)), ResonantMode);
  const ModeSystem sys = build_mode_system(k, scalars_ab(0.0, 0.0), false);
  CHECK(std::abs(sys.D1) < 1e-14);
  CHECK_THROWS_AS(build_mode_system(OperatorConstants{1.0, 1.0, 0.0, 2 * M_PI}, scalars_ab(0.0, 0.0)),
                  DegenerateRho);
}

TEST_CASE("monodromy determinant matches the denominators") {
  // det(I - Phi) = e^{rho q0} D1 D2 for constant coefficients.
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 6; ++trial) {
    const VekuaParams params = circle_params(0.4, 0.3 + 0.2 * trial, 0.9, Complex(1.1, 0.4),
                                             testing::random_trig(rng, 2, 0.05 * trial, 0.2),
                                             testing::random_positive_trig(rng, 2, 0.8));
    const ModeScalars sc = scalars_ab(0.4 * (trial - 2), 0.3 + 0.2 * trial);
    const ModeSystem sys = build_mode_system(params, sc);
    const ShootingResult shot =
        oracle_shooting(params, sc, ComplexSeries::constant(1.0), ComplexSeries::constant(0.5), 64);
    const Complex expected = std::exp(sys.rho * sys.q0) * sys.D1 * sys.D2;
    CHECK(std::abs(shot.det_I_minus_monodromy - expected) < 1e-8 * (1 + std::abs(expected)));
  }
}

TEST_CASE("constant forcing gives the constant solution") {
  const VekuaParams params = circle_params(0.0, 0.0, 0.0, 1.0, TrigPoly(0.0));
  const ModeSystem sys = build_mode_system(params, scalars_ab(0.0, 0.0));
  const TimeIntegrals ti = time_integrals(params);
  const QuadratureGrid grid = make_quadrature_grid(ti, 256, 1);
  const Complex c(0.7, -0.2);
  const ModeSolution sol = solve_mode(sys, ComplexSeries::constant(c), ComplexSeries(), grid);
  CHECK((sol.z1.array() + c).abs().maxCoeff() < 1e-9);
  CHECK(sol.z2.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(sol.max_exponent_real <= 1e-12);
}

TEST_CASE("manufactured twisted solutions") {
  std::mt19937_64 rng(34);
  struct Case {
    double a, b, delta;
    Complex alpha;
    double s_mean;
  };
  const Case cases[] = {
      {0.0, 0.0, 0.5, 2.0, 0.0},           {0.7, 0.35, 0.5, 1.0, 1.0},
      {-1.2, 2.5, 1.5, Complex(0.5, 0.5), 0.2}, {3.0, -4.2, 0.1, 1.0, -0.6},
      {0.0, 0.5, 3.0, 1.0, 0.0},           {8.0, 1.0, 0.3, Complex(0, 2), 0.4},
  };
  for (const auto& cs : cases) {
    const VekuaParams params =
        circle_params(cs.a, cs.b, cs.delta, cs.alpha, testing::random_trig(rng, 2, cs.s_mean, 0.3),
                      testing::random_positive_trig(rng, 3, 1.0));
    const ModeSystem sys = build_mode_system(params, scalars_ab(cs.a, cs.b));
    const TimeIntegrals ti = time_integrals(params);
    const ComplexSeries p1 = testing::random_series(rng, 3), p2 = testing::random_series(rng, 2);
    const ComplexSeries G1 = manufactured_forcing(p1, params, cs.b, sys.rho);
    const ComplexSeries G2 = manufactured_forcing(p2, params, cs.b, -sys.rho);
    const int sub = required_subpanels(sys, ti, 128, std::max(G1.degree(), G2.degree()));
    const QuadratureGrid grid = make_quadrature_grid(ti, 128, sub);
    const ModeSolution sol = solve_mode(sys, G1, G2, grid);
    CAPTURE(cs.a);
    CAPTURE(cs.b);
    CHECK(manufactured_error(sol, ti, p1, p2, cs.b) < 1e-10);
    CHECK(twisted_boundary_residual(sys, sol) < 1e-10);
    CHECK(sol.max_exponent_real <= 1e-12);
  }
}

TEST_CASE("closed form agrees with the shooting oracle") {
  // Nonzero s0 and non-integer b exercise the twist factor in both boundary constants.
  std::mt19937_64 rng(55);
  const double lambdas[] = {0.3, -0.8, 1.4};
  const double p0s[] = {0.37, 1.0, -0.61};
  const double s_means[] = {0.25, 0.0, -0.4};
  for (int i = 0; i < 3; ++i) {
    const VekuaParams params = circle_params(lambdas[i], p0s[i], 0.7, Complex(1.3, -0.2),
                                             testing::random_trig(rng, 2, s_means[i], 0.3),
                                             testing::random_positive_trig(rng, 2, 1.1));
    const ModeScalars sc = scalars_ab(lambdas[i], p0s[i]);
    const ModeSystem sys = build_mode_system(params, sc);
    const TimeIntegrals ti = time_integrals(params);
    const ComplexSeries F1 = testing::random_series(rng, 2), F2 = testing::random_series(rng, 2);
    const ComplexSeries G1 = sys.Tinv(0, 0) * F1 + sys.Tinv(0, 1) * F2;
    const ComplexSeries G2 = sys.Tinv(1, 0) * F1 + sys.Tinv(1, 1) * F2;
    const int nt = 64;
    const QuadratureGrid grid = make_quadrature_grid(ti, nt, required_subpanels(sys, ti, nt, 2));
    const ModeSolution sol = solve_mode(sys, G1, G2, grid);
    const ShootingResult shot = oracle_shooting(params, sc, F1, F2, nt);
    const double scale = 1 + shot.w1.cwiseAbs().maxCoeff() + shot.w2.cwiseAbs().maxCoeff();
    CHECK((sol.w1 - shot.w1).cwiseAbs().maxCoeff() < 1e-7 * scale);
    CHECK((sol.w2 - shot.w2).cwiseAbs().maxCoeff() < 1e-7 * scale);
  }
}

TEST_CASE("quadrature converges at high order") {
  std::mt19937_64 rng(77);
  const VekuaParams params = circle_params(1.5, 0.7, 0.4, Complex(1.0, 0.6),
                                           testing::random_trig(rng, 2, 0.1, 0.4),
                                           testing::random_positive_trig(rng, 2, 1.0));
  const ModeSystem sys = build_mode_system(params, scalars_ab(1.5, 0.7));
  const TimeIntegrals ti = time_integrals(params);
  const ComplexSeries p1 = testing::random_series(rng, 3), p2 = testing::random_series(rng, 3);
  const ComplexSeries G1 = manufactured_forcing(p1, params, 0.7, sys.rho);
  const ComplexSeries G2 = manufactured_forcing(p2, params, 0.7, -sys.rho);
  double prev = 0.0;
  double best_order = 0.0;
  for (int nt : {8, 16, 32, 64}) {
    const ModeSolution sol = solve_mode(sys, G1, G2, make_quadrature_grid(ti, nt, 1));
    const double err = manufactured_error(sol, ti, p1, p2, 0.7);
    MESSAGE("nt=" << nt << " err=" << err);
    if (prev > 0.0 && err > 1e-13) best_order = std::max(best_order, std::log2(prev / err));
    prev = err;
  }
  CHECK(best_order >= 8.0);
}

TEST_CASE("quadrature grid rejects bad sizes") {
  const VekuaParams params = circle_params(0.0, 0.0, 0.0, 1.0, TrigPoly(0.0));
  const TimeIntegrals ti = time_integrals(params);
  CHECK_THROWS_AS(make_quadrature_grid(ti, 7, 1), InvalidParameters);
  CHECK_THROWS_AS(make_quadrature_grid(ti, 0, 1), InvalidParameters);
}
