#include "vekua/decay.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>

#include "vekua/sampling.hpp"

namespace vekua {

namespace {

double sup_derivative(const TimeProfile& p, int nt, int beta) {
  if (const auto* s = std::get_if<ComplexSeries>(&p)) {
    const int n = std::max(nt, 8 * (s->degree() + 1));
    return grid_samples(derivative(*s, beta), n).cwiseAbs().maxCoeff();
  }
  SampledProfile v = std::get<SampledProfile>(p);
  for (int r = 0; r < beta; ++r) v = spectral_derivative(v);
  return v.cwiseAbs().maxCoeff();
}

}  // namespace

DecayDiagnostic decay_diagnostic(const GroupModel& model, const CoefficientField& field,
                                 const std::vector<int>& orders, int max_poly_order) {
  DecayDiagnostic out;
  out.max_poly_order = max_poly_order;

  // weight -> beta -> max supnorm
  std::map<double, std::map<int, double>> bins;
  for (const auto& [mode, p] : field.modes) {
    const double w = mode_scalars(model, mode).weight;
    auto& row = bins[w];
    for (int beta : orders) {
      const double v = sup_derivative(p, field.nt, beta);
      auto [it, fresh] = row.emplace(beta, v);
      if (!fresh) it->second = std::max(it->second, v);
    }
  }
  for (const auto& [w, row] : bins)
    for (const auto& [beta, v] : row) out.table.push_back({w, beta, v});

  const std::size_t n = bins.size();
  out.smooth_compatible = !orders.empty();
  for (int beta : orders) {
    DecayFit fit;
    fit.beta = beta;
    if (n < 2) {
      out.smooth_compatible = false;
      out.fits.push_back(fit);
      continue;
    }
    const std::size_t start = std::min(n / 2, n - 2);
    std::vector<double> xs, ys;
    bool tail_has_zero = false;
    std::size_t idx = 0;
    for (const auto& [w, row] : bins) {
      if (idx++ < start) continue;
      const double v = row.at(beta);
      if (v > 0.0) {
        xs.push_back(std::log(w));
        ys.push_back(std::log(v));
      } else {
        tail_has_zero = true;
      }
    }
    fit.bins_used = xs.size();
    if (xs.size() >= 2) {
      const double m = static_cast<double>(xs.size());
      double mx = 0.0, my = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i] / m, my += ys[i] / m;
      double sxx = 0.0, sxy = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
      }
      const double slope = sxy / sxx;
      double ss = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (my + slope * (xs[i] - mx));
        ss += e * e;
      }
      fit.slope = slope;
      fit.residual = std::sqrt(ss / m);
    } else if (tail_has_zero) {
      fit.slope = -std::numeric_limits<double>::infinity();
    }
    fit.smooth_compatible = fit.slope && *fit.slope < -static_cast<double>(max_poly_order);
    out.smooth_compatible = out.smooth_compatible && fit.smooth_compatible;
    out.fits.push_back(fit);
  }
  if (n < 2) out.note = "slope undefined: fewer than two weight bins";
  return out;
}

void write_decay_csv(std::ostream& os, const DecayDiagnostic& d) {
  os << "weight,beta,supnorm\n";
  os << std::setprecision(17);
  for (const auto& r : d.table) os << r.weight << ',' << r.beta << ',' << r.supnorm << '\n';
}

}  // namespace vekua
