#include "vekua/mode_system.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "vekua/errors.hpp"

namespace vekua {

void validate(const VekuaParams& params) {
  validate(params.group);
  if (params.alpha == Complex(0.0, 0.0))
    throw InvalidParameters("alpha must be nonzero (alpha in C \\ {0})");
  if (!std::isfinite(params.delta) || !std::isfinite(params.alpha.real()) ||
      !std::isfinite(params.alpha.imag()))
    throw InvalidParameters("delta and alpha must be finite");
  (void)q_weights(params.q);
  if (!params.drift.empty()) {
    if (params.drift.size() != params.group.size())
      throw InvalidParameters("drift needs one p_j(t) per factor");
    for (std::size_t j = 0; j < params.drift.size(); ++j) {
      if (std::abs(params.drift[j].mean() - params.group.p0[j]) > 1e-12 * (1.0 + std::abs(params.group.p0[j])))
        throw InvalidParameters("mean of drift p_j must equal p0[j]");
    }
  }
}

bool violates_hypothesis_one(const VekuaParams& params) {
  const double abs_alpha = std::abs(params.alpha);
  const double abs_delta = std::abs(params.delta);
  return std::abs(abs_alpha - abs_delta) <= 1e-12 * std::max(abs_alpha, abs_delta);
}

OperatorConstants operator_constants(const VekuaParams& params) {
  return {params.delta, params.alpha, mean2pi(params.s), mean2pi(params.q)};
}

Complex rho_branch(double a, double delta, Complex alpha) {
  const Complex c(a, -delta);
  Complex rho = std::sqrt(c * c + std::norm(alpha));
  if (rho.real() < 0.0 || (rho.real() == 0.0 && rho.imag() < 0.0)) rho = -rho;
  return rho;
}

Eigen::Matrix2cd mode_matrix(double a, double delta, Complex alpha) {
  const Complex c(a, -delta);
  Eigen::Matrix2cd m;
  m << -c, alpha, std::conj(alpha), c;
  return m;
}

double resonance_tolerance(double s0) { return 1e-14 * (1.0 + std::exp(s0)); }

Denominators boundary_denominators(const OperatorConstants& constants, const ModeScalars& scalars) {
  const Complex rho = rho_branch(scalars.a, constants.delta, constants.alpha);
  const Complex twist(constants.s0, 2.0 * M_PI * scalars.b);
  const Complex decay = std::exp(-rho * constants.q0);
  return {decay - std::exp(twist), 1.0 - std::exp(-rho * constants.q0 + twist)};
}

ModeSystem build_mode_system(const OperatorConstants& constants, const ModeScalars& scalars,
                             bool check_resonance) {
  ModeSystem sys;
  sys.a = scalars.a;
  sys.b = scalars.b;
  sys.s0 = constants.s0;
  sys.q0 = constants.q0;
  sys.alpha = constants.alpha;
  sys.delta = constants.delta;
  sys.rho = rho_branch(scalars.a, constants.delta, constants.alpha);

  const Complex c(scalars.a, -constants.delta);
  const double scale = std::sqrt(std::norm(c) + std::norm(constants.alpha));
  if (std::abs(sys.rho) <= 1e-7 * scale)
    throw DegenerateRho("rho = 0 at a = " + std::to_string(scalars.a) +
                        " (hypothesis (I): |alpha| != |delta|)");

  sys.T << constants.alpha, constants.alpha, c + sys.rho, c - sys.rho;
  sys.Tinv << c - sys.rho, -constants.alpha, -c - sys.rho, constants.alpha;
  sys.Tinv *= -1.0 / (2.0 * constants.alpha * sys.rho);

  const auto d = boundary_denominators(constants, scalars);
  sys.D1 = d.D1;
  sys.D2 = d.D2;
  if (check_resonance) {
    const double tol = resonance_tolerance(constants.s0);
    if (std::abs(sys.D1) < tol || std::abs(sys.D2) < tol)
      throw ResonantMode("", std::abs(sys.D1), std::abs(sys.D2));
  }
  return sys;
}

ModeSystem build_mode_system(const VekuaParams& params, const ModeScalars& scalars) {
  return build_mode_system(operator_constants(params), scalars);
}

TimeIntegrals time_integrals(const VekuaParams& params) {
  TimeIntegrals out;
  out.q = q_weights(params.q);
  out.S = antiderivative(params.s);
  out.s0 = mean2pi(params.s);
  out.q_sup = params.q.abs_bound();
  out.s_sup = params.s.abs_bound();
  return out;
}

namespace {

constexpr std::array<double, 5> kGaussNodes = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                               0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kGaussWeights = {0.2369268850561891, 0.4786286704993665,
                                                 0.5688888888888889, 0.4786286704993665,
                                                 0.2369268850561891};

}  // namespace

QuadratureGrid make_quadrature_grid(const TimeIntegrals& integrals, int nt, int subpanels) {
  if (nt < 2 || nt % 2 != 0) throw InvalidParameters("grid size nt must be even and >= 2");
  if (subpanels < 1) throw InvalidParameters("subpanels must be >= 1");
  QuadratureGrid g;
  g.nt = nt;
  g.subpanels = subpanels;
  g.t.resize(nt + 1);
  g.Q_grid.resize(nt + 1);
  g.S_grid.resize(nt + 1);
  const double h = 2.0 * M_PI / nt;
  for (int j = 0; j <= nt; ++j) {
    g.t[j] = h * j;
    g.Q_grid[j] = integrals.q.Q(g.t[j]);
    g.S_grid[j] = integrals.S(g.t[j]);
  }
  // Pin the endpoint exactly so Qtilde(2 pi) = 0.
  g.Q_grid[nt] = integrals.q.q0;
  g.S_grid[nt] = integrals.s0;

  const Eigen::Index count = static_cast<Eigen::Index>(nt) * subpanels * 5;
  g.nodes.resize(count);
  g.weights.resize(count);
  g.Q_nodes.resize(count);
  g.S_nodes.resize(count);
  const double sub = h / subpanels;
  Eigen::Index idx = 0;
  for (int j = 0; j < nt; ++j) {
    for (int p = 0; p < subpanels; ++p) {
      const double left = g.t[j] + p * sub;
      for (int i = 0; i < 5; ++i, ++idx) {
        const double sigma = left + 0.5 * sub * (kGaussNodes[i] + 1.0);
        g.nodes[idx] = sigma;
        g.weights[idx] = 0.5 * sub * kGaussWeights[i];
        g.Q_nodes[idx] = integrals.q.Q(sigma);
        g.S_nodes[idx] = integrals.S(sigma);
      }
    }
  }
  return g;
}

int required_subpanels(const ModeSystem& system, const TimeIntegrals& integrals, int nt,
                       int forcing_degree) {
  const double h = 2.0 * M_PI / nt;
  const double omega = std::abs(system.b) + std::abs(system.rho) * integrals.q_sup +
                       integrals.s_sup + forcing_degree;
  return std::max(1, static_cast<int>(std::ceil(h * omega)));
}

ModeSolution solve_mode(const ModeSystem& system, const ComplexSeries& G1, const ComplexSeries& G2,
                        const QuadratureGrid& grid) {
  Eigen::VectorXcd g1(grid.nodes.size()), g2(grid.nodes.size());
  for (Eigen::Index i = 0; i < grid.nodes.size(); ++i) {
    g1[i] = G1(grid.nodes[i]);
    g2[i] = G2(grid.nodes[i]);
  }
  return solve_mode(system, g1, g2, grid);
}

ModeSolution solve_mode(const ModeSystem& system, const Eigen::VectorXcd& G1_nodes,
                        const Eigen::VectorXcd& G2_nodes, const QuadratureGrid& grid) {
  if (G1_nodes.size() != grid.nodes.size() || G2_nodes.size() != grid.nodes.size())
    throw std::invalid_argument("solve_mode: forcing must be given at every quadrature node");
  const int nt = grid.nt;
  const int per = grid.nodes_per_interval();
  const Complex rho = system.rho;
  ModeSolution out;
  double max_re = -std::numeric_limits<double>::infinity();
  auto weight_exp = [&](Complex arg) {
    max_re = std::max(max_re, arg.real());
    return std::exp(arg);
  };

  // h_i(sigma) = e^{-i b sigma - S(sigma)} G_i(sigma) at every node.
  const Eigen::Index count = grid.nodes.size();
  Eigen::VectorXcd h1(count), h2(count);
  for (Eigen::Index i = 0; i < count; ++i) {
    const double sigma = grid.nodes[i];
    const Complex carrier = std::exp(Complex(-grid.S_nodes[i], -system.b * sigma)) * grid.weights[i];
    h1[i] = carrier * G1_nodes[i];
    h2[i] = carrier * G2_nodes[i];
  }

  // Forward: I2(t) = int_0^t e^{-rho (Q(t) - Q(sigma))} h2.
  Eigen::VectorXcd I2(nt + 1);
  I2[0] = 0.0;
  for (int j = 0; j < nt; ++j) {
    const double q_right = grid.Q_grid[j + 1];
    Complex acc = weight_exp(-rho * (q_right - grid.Q_grid[j])) * I2[j];
    for (int i = j * per; i < (j + 1) * per; ++i)
      acc += weight_exp(-rho * (q_right - grid.Q_nodes[i])) * h2[i];
    I2[j + 1] = acc;
  }

  // Backward: J1(t) = int_t^{2 pi} e^{rho (Q(t) - Q(sigma))} h1.
  Eigen::VectorXcd J1(nt + 1);
  J1[nt] = 0.0;
  for (int j = nt - 1; j >= 0; --j) {
    const double q_left = grid.Q_grid[j];
    Complex acc = weight_exp(rho * (q_left - grid.Q_grid[j + 1])) * J1[j + 1];
    for (int i = j * per; i < (j + 1) * per; ++i)
      acc += weight_exp(rho * (q_left - grid.Q_nodes[i])) * h1[i];
    J1[j] = acc;
  }

  // J1(0) = int e^{-rho Q} h1 and I2(2 pi) = int e^{rho (Q - q0)} h2.
  const Complex twist = system.twist();
  out.K1 = J1[0] / system.D1;
  out.K2 = std::exp(twist) * I2[nt] / system.D2;

  out.grid = grid.t;
  out.z1.resize(nt + 1);
  out.z2.resize(nt + 1);
  out.w1.resize(nt + 1);
  out.w2.resize(nt + 1);
  for (int j = 0; j <= nt; ++j) {
    const double Qj = grid.Q_grid[j];
    out.z1[j] = -J1[j] + out.K1 * weight_exp(rho * (Qj - system.q0));
    out.z2[j] = I2[j] + out.K2 * weight_exp(-rho * Qj);
    const Complex carrier = std::exp(Complex(grid.S_grid[j], system.b * grid.t[j]));
    const Eigen::Vector2cd y = system.T * Eigen::Vector2cd(out.z1[j], out.z2[j]);
    out.w1[j] = carrier * y[0];
    out.w2[j] = carrier * y[1];
  }
  out.max_exponent_real = max_re;

  if (!out.w1.allFinite() || !out.w2.allFinite() || !std::isfinite(std::abs(out.K1)) ||
      !std::isfinite(std::abs(out.K2)))
    throw QuadratureFailure("non-finite values in closed-form mode solve");
  return out;
}

double twisted_boundary_residual(const ModeSystem& system, const ModeSolution& solution) {
  const Complex e = std::exp(system.twist());
  const auto last = solution.z1.size() - 1;
  return std::max(std::abs(solution.z1[0] - e * solution.z1[last]),
                  std::abs(solution.z2[0] - e * solution.z2[last]));
}

}  // namespace vekua
