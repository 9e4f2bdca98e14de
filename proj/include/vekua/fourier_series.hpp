#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <complex>

#include <Eigen/Core>

namespace vekua {

/// Finite series sum_{|j| <= degree} c_j e^{i j t} on T = R / 2 pi Z.
/// Scalar is a complex type; coefficient j is stored at position j + degree.
template <typename Scalar>
class FourierSeries {
 public:
  using RealScalar = typename Eigen::NumTraits<Scalar>::Real;
  using Coefficients = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  FourierSeries() : coeffs_(Coefficients::Zero(1)) {}
  explicit FourierSeries(int degree) : coeffs_(Coefficients::Zero(2 * degree + 1)) {}
  explicit FourierSeries(Coefficients coeffs) : coeffs_(std::move(coeffs)) {
    assert(coeffs_.size() % 2 == 1);
  }

  static FourierSeries constant(Scalar c) {
    FourierSeries out;
    out.coeffs_[0] = c;
    return out;
  }

  int degree() const { return static_cast<int>((coeffs_.size() - 1) / 2); }
  const Coefficients& coefficients() const { return coeffs_; }

  Scalar coeff(int freq) const {
    return std::abs(freq) > degree() ? Scalar(0) : coeffs_[freq + degree()];
  }
  Scalar& coeff_ref(int freq) {
    assert(std::abs(freq) <= degree());
    return coeffs_[freq + degree()];
  }

  Scalar operator()(RealScalar t) const {
    // Horner in z = e^{it}, then shift by e^{-i degree t}.
    const Scalar z = std::polar(RealScalar(1), t);
    Scalar acc(0);
    for (Eigen::Index i = coeffs_.size() - 1; i >= 0; --i) acc = acc * z + coeffs_[i];
    return acc * std::polar(RealScalar(1), -degree() * t);
  }

  /// Values at t_j = 2 pi j / nt, j = 0..nt (both endpoints).
  Coefficients sample(int nt) const {
    Coefficients out(nt + 1);
    for (int j = 0; j <= nt; ++j) out[j] = (*this)(RealScalar(2 * M_PI) * j / nt);
    return out;
  }

  FourierSeries resized(int new_degree) const {
    FourierSeries out(new_degree);
    const int d = std::min(degree(), new_degree);
    for (int j = -d; j <= d; ++j) out.coeff_ref(j) = coeff(j);
    return out;
  }

  RealScalar max_abs_coeff() const { return coeffs_.cwiseAbs().maxCoeff(); }

  FourierSeries& operator+=(const FourierSeries& rhs) {
    if (rhs.degree() > degree()) *this = resized(rhs.degree());
    for (int j = -rhs.degree(); j <= rhs.degree(); ++j) coeff_ref(j) += rhs.coeff(j);
    return *this;
  }
  FourierSeries& operator-=(const FourierSeries& rhs) { return *this += rhs * Scalar(-1); }
  FourierSeries& operator*=(Scalar s) {
    coeffs_ *= s;
    return *this;
  }

  friend FourierSeries operator+(FourierSeries lhs, const FourierSeries& rhs) { return lhs += rhs; }
  friend FourierSeries operator-(FourierSeries lhs, const FourierSeries& rhs) { return lhs -= rhs; }
  friend FourierSeries operator*(FourierSeries lhs, Scalar s) { return lhs *= s; }
  friend FourierSeries operator*(Scalar s, FourierSeries rhs) { return rhs *= s; }

  /// Pointwise product (coefficient convolution).
  friend FourierSeries operator*(const FourierSeries& lhs, const FourierSeries& rhs) {
    FourierSeries out(lhs.degree() + rhs.degree());
    for (int i = -lhs.degree(); i <= lhs.degree(); ++i) {
      const Scalar ci = lhs.coeff(i);
      if (ci == Scalar(0)) continue;
      for (int j = -rhs.degree(); j <= rhs.degree(); ++j) out.coeff_ref(i + j) += ci * rhs.coeff(j);
    }
    return out;
  }

 private:
  Coefficients coeffs_;
};

template <typename Scalar>
FourierSeries<Scalar> derivative(const FourierSeries<Scalar>& f, int order = 1) {
  FourierSeries<Scalar> out = f;
  for (int j = -f.degree(); j <= f.degree(); ++j) {
    Scalar factor(1);
    for (int r = 0; r < order; ++r) factor *= Scalar(0, j);
    out.coeff_ref(j) *= factor;
  }
  return out;
}

/// Series of the complex conjugate function: c_j -> conj(c_{-j}).
template <typename Scalar>
FourierSeries<Scalar> conj(const FourierSeries<Scalar>& f) {
  FourierSeries<Scalar> out(f.degree());
  for (int j = -f.degree(); j <= f.degree(); ++j) out.coeff_ref(j) = std::conj(f.coeff(-j));
  return out;
}

using ComplexSeries = FourierSeries<std::complex<double>>;

}  // namespace vekua
