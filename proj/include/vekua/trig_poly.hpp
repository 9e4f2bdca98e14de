#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vekua/fourier_series.hpp"

namespace vekua {

struct Harmonic {
  int freq = 1;
  double cos_coeff = 0.0;
  double sin_coeff = 0.0;
};

/// Real trigonometric polynomial mean + sum (c_k cos kt + s_k sin kt).
/// Frequencies are strictly increasing and >= 1.
class TrigPoly {
 public:
  TrigPoly() = default;
  explicit TrigPoly(double mean, std::vector<Harmonic> harmonics = {});

  static TrigPoly constant(double c) { return TrigPoly(c); }

  double mean() const { return mean_; }
  const std::vector<Harmonic>& harmonics() const { return harmonics_; }
  int max_frequency() const { return harmonics_.empty() ? 0 : harmonics_.back().freq; }
  bool is_zero() const;

  double operator()(double t) const;
  /// Bound sum |coefficients| >= sup |f|.
  double abs_bound() const;

  ComplexSeries to_series() const;

 private:
  double mean_ = 0.0;
  std::vector<Harmonic> harmonics_;
};

TrigPoly derivative(const TrigPoly& f);

/// Integral of f over one full period.
double mean2pi(const TrigPoly& f);

/// F(t) = int_0^t f = linear_coeff * t + periodic_part(t), with F(0) = 0 exactly.
struct SplitAntiderivative {
  double linear_coeff = 0.0;
  TrigPoly periodic_part;

  double operator()(double t) const;
  /// periodic_part(t) - periodic_part(0), the 2 pi-periodic remainder vanishing at 0.
  double periodic(double t) const;
};

SplitAntiderivative antiderivative(const TrigPoly& f);

struct NonnegativityCheck {
  bool passed = false;
  double witness_t = 0.0;
  double witness_value = 0.0;
  std::string message;
};

inline constexpr double kNonnegTolerance = 1e-12;
inline constexpr int kDefaultNonnegSamples = 4096;

/// Dense-sampling sign check; also fails for the zero polynomial.
NonnegativityCheck check_nonnegative(const TrigPoly& q, int samples = kDefaultNonnegSamples);

/// Q(t) = int_0^t q and Qtilde(t) = -int_t^{2 pi} q = Q(t) - q0.
struct QWeights {
  SplitAntiderivative primitive;
  double q0 = 0.0;

  double Q(double t) const { return primitive(t); }
  double Qtilde(double t) const { return primitive(t) - q0; }
};

/// Throws InvalidParameters when q fails check_nonnegative.
QWeights q_weights(const TrigPoly& q);

}  // namespace vekua
