#include "vekua/su2.hpp"

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Eigenvalues>

namespace vekua::su2 {

namespace {

using Complex = std::complex<double>;

// J_+ with (J_+)_{m+1, m} = sqrt((l - m)(l + m + 1)).
Eigen::MatrixXd jplus(int two_l) {
  const int dim = two_l + 1;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
  const double l = 0.5 * two_l;
  for (int i = 0; i + 1 < dim; ++i) {
    const double m = -l + i;
    out(i + 1, i) = std::sqrt((l - m) * (l + m + 1.0));
  }
  return out;
}

}  // namespace

Eigen::MatrixXcd jx(int two_l) {
  const Eigen::MatrixXd p = jplus(two_l);
  return (0.5 * (p + p.transpose())).cast<Complex>();
}

Eigen::MatrixXcd jy(int two_l) {
  const Eigen::MatrixXd p = jplus(two_l);
  return (p - p.transpose()).cast<Complex>() * Complex(0.0, -0.5);
}

Eigen::MatrixXcd jz(int two_l) {
  const int dim = two_l + 1;
  Eigen::VectorXd m(dim);
  for (int i = 0; i < dim; ++i) m[i] = -0.5 * two_l + i;
  return m.cast<Complex>().asDiagonal();
}

Eigen::MatrixXcd irrep(int two_l, const Eigen::Vector3d& axis, double angle) {
  const Eigen::Vector3d n = axis.normalized();
  const Eigen::MatrixXcd generator = n.x() * jx(two_l) + n.y() * jy(two_l) + n.z() * jz(two_l);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(generator);
  const Eigen::VectorXcd phases =
      (eig.eigenvalues() * (-angle)).unaryExpr([](double x) { return std::polar(1.0, x); });
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

int conjugation_sign(int two_m, int two_n) {
  const int m_minus_n = (two_m - two_n) / 2;
  return (m_minus_n % 2 == 0) ? 1 : -1;
}

double conjugation_convention_residual(int two_l, int samples, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> uniform(0.0, 4.0 * M_PI);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Eigen::Vector3d axis(gauss(rng), gauss(rng), gauss(rng));
    const Eigen::MatrixXcd t = irrep(two_l, axis, uniform(rng));
    for (int two_n = -two_l; two_n <= two_l; two_n += 2) {
      for (int two_m = -two_l; two_m <= two_l; two_m += 2) {
        const Complex lhs = std::conj(t(row_of(two_l, two_n), row_of(two_l, two_m)));
        const Complex rhs = static_cast<double>(conjugation_sign(two_m, two_n)) *
                            t(row_of(two_l, -two_n), row_of(two_l, -two_m));
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    }
  }
  return worst;
}

}  // namespace vekua::su2
