#include "vekua/trig_poly.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "vekua/errors.hpp"

namespace vekua {

TrigPoly::TrigPoly(double mean, std::vector<Harmonic> harmonics)
    : mean_(mean), harmonics_(std::move(harmonics)) {
  int previous = 0;
  for (const auto& h : harmonics_) {
    if (h.freq <= previous)
      throw std::invalid_argument("TrigPoly frequencies must be strictly increasing and >= 1");
    previous = h.freq;
  }
}

bool TrigPoly::is_zero() const {
  if (mean_ != 0.0) return false;
  for (const auto& h : harmonics_)
    if (h.cos_coeff != 0.0 || h.sin_coeff != 0.0) return false;
  return true;
}

double TrigPoly::operator()(double t) const {
  double value = mean_;
  for (const auto& h : harmonics_)
    value += h.cos_coeff * std::cos(h.freq * t) + h.sin_coeff * std::sin(h.freq * t);
  return value;
}

double TrigPoly::abs_bound() const {
  double bound = std::abs(mean_);
  for (const auto& h : harmonics_) bound += std::abs(h.cos_coeff) + std::abs(h.sin_coeff);
  return bound;
}

ComplexSeries TrigPoly::to_series() const {
  ComplexSeries out(max_frequency());
  out.coeff_ref(0) = mean_;
  for (const auto& h : harmonics_) {
    out.coeff_ref(h.freq) = std::complex<double>(0.5 * h.cos_coeff, -0.5 * h.sin_coeff);
    out.coeff_ref(-h.freq) = std::complex<double>(0.5 * h.cos_coeff, 0.5 * h.sin_coeff);
  }
  return out;
}

TrigPoly derivative(const TrigPoly& f) {
  std::vector<Harmonic> out;
  for (const auto& h : f.harmonics())
    out.push_back({h.freq, h.freq * h.sin_coeff, -h.freq * h.cos_coeff});
  return TrigPoly(0.0, std::move(out));
}

double mean2pi(const TrigPoly& f) { return 2.0 * M_PI * f.mean(); }

SplitAntiderivative antiderivative(const TrigPoly& f) {
  // int_0^t (c cos k tau + s sin k tau) = (c/k) sin kt + (s/k)(1 - cos kt).
  double constant = 0.0;
  std::vector<Harmonic> harmonics;
  for (const auto& h : f.harmonics()) {
    const double k = h.freq;
    constant += h.sin_coeff / k;
    harmonics.push_back({h.freq, -h.sin_coeff / k, h.cos_coeff / k});
  }
  return {f.mean(), TrigPoly(constant, std::move(harmonics))};
}

double SplitAntiderivative::periodic(double t) const {
  double value = 0.0;
  for (const auto& h : periodic_part.harmonics())
    value += h.cos_coeff * (std::cos(h.freq * t) - 1.0) + h.sin_coeff * std::sin(h.freq * t);
  return value;
}

double SplitAntiderivative::operator()(double t) const { return linear_coeff * t + periodic(t); }

NonnegativityCheck check_nonnegative(const TrigPoly& q, int samples) {
  if (samples < 4 * (q.max_frequency() + 1))
    throw std::invalid_argument("check_nonnegative: too few samples for the polynomial degree");
  NonnegativityCheck out;
  if (q.is_zero()) {
    out.message = "q identically zero";
    return out;
  }
  double min_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double t = 2.0 * M_PI * i / samples;
    const double v = q(t);
    if (v < min_value) {
      min_value = v;
      out.witness_t = t;
      out.witness_value = v;
    }
  }
  out.passed = min_value >= -kNonnegTolerance;
  if (!out.passed)
    out.message = "q changes sign: q(" + std::to_string(out.witness_t) +
                  ") = " + std::to_string(out.witness_value);
  return out;
}

QWeights q_weights(const TrigPoly& q) {
  const int samples = std::max(kDefaultNonnegSamples, 4 * (q.max_frequency() + 1));
  const auto check = check_nonnegative(q, samples);
  if (!check.passed) throw InvalidParameters("q must be nonnegative and not identically zero: " + check.message);
  return {antiderivative(q), mean2pi(q)};
}

}  // namespace vekua
