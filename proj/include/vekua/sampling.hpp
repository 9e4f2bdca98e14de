#pragma once

#include <Eigen/Core>

#include "vekua/fourier_series.hpp"

namespace vekua {

/// t_j = 2 pi j / nt for j = 0..nt.
Eigen::VectorXd time_grid(int nt);

/// Trigonometric interpolant of equispaced samples. Accepts nt or nt + 1 values
/// (a trailing copy of the t = 0 value is dropped). The Nyquist term is split evenly.
ComplexSeries series_from_samples(const Eigen::VectorXcd& samples);

/// Values of the series at t_j, j = 0..nt, by folding modulo nt and one inverse FFT.
Eigen::VectorXcd grid_samples(const ComplexSeries& s, int nt);

/// Spectral derivative of equispaced periodic samples; output has the input's length.
Eigen::VectorXcd spectral_derivative(const Eigen::VectorXcd& samples);

/// Least-squares fit of the samples by a series of the given degree (< nt / 2).
ComplexSeries fit_series(const Eigen::VectorXcd& samples, int degree);

}  // namespace vekua
