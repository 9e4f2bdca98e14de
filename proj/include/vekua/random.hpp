#pragma once

#include <cmath>
#include <random>

#include "vekua/field.hpp"
#include "vekua/fourier_series.hpp"
#include "vekua/trig_poly.hpp"

namespace vekua::rnd {

inline ComplexSeries random_series(std::mt19937_64& rng, int degree, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexSeries out(degree);
  for (int j = -degree; j <= degree; ++j) out.coeff_ref(j) = scale * std::complex<double>(u(rng), u(rng));
  return out;
}

inline TrigPoly random_trig(std::mt19937_64& rng, int degree, double mean, double amplitude) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Harmonic> h;
  for (int k = 1; k <= degree; ++k) h.push_back({k, amplitude * u(rng), amplitude * u(rng)});
  return TrigPoly(mean, std::move(h));
}

/// Strictly positive: the harmonics sum to at most 0.9 * mean.
inline TrigPoly random_positive_trig(std::mt19937_64& rng, int degree, double mean) {
  const TrigPoly p = random_trig(rng, degree, 0.0, 1.0);
  const double scale = 0.9 * mean / (p.abs_bound() + 1e-300);
  std::vector<Harmonic> h;
  for (auto hh : p.harmonics()) {
    hh.cos_coeff *= scale;
    hh.sin_coeff *= scale;
    h.push_back(hh);
  }
  return TrigPoly(mean, std::move(h));
}

/// Series profile at every mode of the truncation, scaled by weight^{-decay}.
inline CoefficientField random_field(std::mt19937_64& rng, const GroupModel& model,
                                     const Truncation& truncation, int degree, int nt,
                                     double decay = 0.0) {
  CoefficientField f;
  f.truncation = truncation;
  f.nt = nt;
  for (const auto& mode : enumerate_modes(model, truncation)) {
    const double w = mode_scalars(model, mode).weight;
    f.modes.emplace(mode, random_series(rng, degree, std::pow(w, -decay)));
  }
  return f;
}

}  // namespace vekua::rnd
