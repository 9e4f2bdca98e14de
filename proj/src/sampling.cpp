#include "vekua/sampling.hpp"

#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/FFT>

namespace vekua {

Eigen::VectorXd time_grid(int nt) {
  Eigen::VectorXd t(nt + 1);
  for (int j = 0; j <= nt; ++j) t[j] = 2.0 * M_PI * j / nt;
  return t;
}

namespace {

std::vector<std::complex<double>> periodic_part(const Eigen::VectorXcd& samples, int nt) {
  return {samples.data(), samples.data() + nt};
}

}  // namespace

ComplexSeries series_from_samples(const Eigen::VectorXcd& samples) {
  if (samples.size() < 2) throw std::invalid_argument("series_from_samples: need at least 2 samples");
  // Grids are even; an odd length means the closing t = 2 pi sample is present.
  int nt = static_cast<int>(samples.size());
  if (nt % 2 == 1) --nt;
  const auto x = periodic_part(samples, nt);
  std::vector<std::complex<double>> spectrum;
  Eigen::FFT<double> fft;
  fft.fwd(spectrum, x);

  const int half = nt / 2;
  ComplexSeries out(half);
  for (int j = 0; j < half; ++j) out.coeff_ref(j) = spectrum[j] / static_cast<double>(nt);
  for (int j = 1; j < half; ++j) out.coeff_ref(-j) = spectrum[nt - j] / static_cast<double>(nt);
  const std::complex<double> nyquist = spectrum[half] / (2.0 * nt);
  out.coeff_ref(half) += nyquist;
  out.coeff_ref(-half) += nyquist;
  return out;
}

Eigen::VectorXcd grid_samples(const ComplexSeries& s, int nt) {
  if (nt < 1) throw std::invalid_argument("grid_samples: nt must be positive");
  std::vector<std::complex<double>> folded(nt, 0.0);
  for (int j = -s.degree(); j <= s.degree(); ++j) folded[((j % nt) + nt) % nt] += s.coeff(j);
  std::vector<std::complex<double>> values;
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  fft.inv(values, folded);
  Eigen::VectorXcd out(nt + 1);
  for (int j = 0; j < nt; ++j) out[j] = values[j];
  out[nt] = values[0];
  return out;
}

Eigen::VectorXcd spectral_derivative(const Eigen::VectorXcd& samples) {
  const ComplexSeries d = derivative(series_from_samples(samples));
  const int nt = static_cast<int>(samples.size()) % 2 == 1 ? static_cast<int>(samples.size()) - 1
                                                          : static_cast<int>(samples.size());
  Eigen::VectorXcd out = grid_samples(d, nt);
  return out.head(samples.size());
}

ComplexSeries fit_series(const Eigen::VectorXcd& samples, int degree) {
  const ComplexSeries full = series_from_samples(samples);
  if (degree >= full.degree())
    throw std::invalid_argument("fit_series: degree must be below nt / 2");
  return full.resized(degree);
}

}  // namespace vekua
