#include "vekua/field.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "vekua/errors.hpp"
#include "vekua/sampling.hpp"

namespace vekua {

SampledProfile sample_profile(const TimeProfile& p, int nt) {
  if (const auto* s = std::get_if<ComplexSeries>(&p)) return grid_samples(*s, nt);
  const auto& v = std::get<SampledProfile>(p);
  if (v.size() != nt + 1)
    throw std::invalid_argument("sampled profile has " + std::to_string(v.size()) +
                                " values, expected nt + 1 = " + std::to_string(nt + 1));
  return v;
}

bool CoefficientField::all_series() const {
  for (const auto& [mode, p] : modes)
    if (!is_series(p)) return false;
  return true;
}

void validate(const GroupModel& model, const CoefficientField& field) {
  if (field.nt < 2 || field.nt % 2 != 0) throw InvalidParameters("field grid size nt must be even and >= 2");
  if (field.truncation.size() != model.size())
    throw InvalidParameters("field truncation needs one bound per factor");
  for (const auto& [mode, p] : field.modes) {
    if (!is_admissible(model, mode)) throw InvalidParameters("inadmissible mode " + to_string(mode));
    if (!within_truncation(model, field.truncation, mode))
      throw InvalidParameters("mode " + to_string(mode) + " lies outside the field truncation");
    if (!is_series(p) && std::get<SampledProfile>(p).size() != field.nt + 1)
      throw InvalidParameters("mode " + to_string(mode) + ": sampled profile length differs from nt + 1");
  }
}

namespace {

TimeProfile conj_profile(const TimeProfile& p, Complex phase) {
  if (const auto* s = std::get_if<ComplexSeries>(&p)) return phase * conj(*s);
  return SampledProfile(phase * std::get<SampledProfile>(p).conjugate());
}

std::set<ModeIndex> union_keys(const CoefficientField& f, const CoefficientField& g) {
  std::set<ModeIndex> keys;
  for (const auto& kv : f.modes) keys.insert(kv.first);
  for (const auto& kv : g.modes) keys.insert(kv.first);
  return keys;
}

const TimeProfile* find(const CoefficientField& f, const ModeIndex& m) {
  const auto it = f.modes.find(m);
  return it == f.modes.end() ? nullptr : &it->second;
}

SampledProfile samples_or_zero(const TimeProfile* p, int nt) {
  return p ? sample_profile(*p, nt) : SampledProfile(SampledProfile::Zero(nt + 1));
}

ComplexSeries series_or_zero(const TimeProfile* p) {
  return p ? std::get<ComplexSeries>(*p) : ComplexSeries();
}

bool series_or_absent(const TimeProfile* p) { return !p || is_series(*p); }

}  // namespace

CoefficientField conjugate_field(const GroupModel& model, const CoefficientField& field) {
  CoefficientField out;
  out.truncation = field.truncation;
  out.nt = field.nt;
  for (const auto& [mode, p] : field.modes) {
    const ConjugateMode c = conjugate_mode(model, mode);
    if (!within_truncation(model, field.truncation, c.mode))
      throw TruncationAsymmetry("conjugate of " + to_string(mode) + " is " + to_string(c.mode) +
                                ", outside the truncation");
    out.modes.emplace(c.mode, conj_profile(p, c.phase));
  }
  return out;
}

PairedField pair_with_conjugate(const GroupModel& model, const CoefficientField& primal) {
  return {primal, conjugate_field(model, primal)};
}

double pairing_residual(const GroupModel& model, const PairedField& field) {
  return max_abs_difference(field.conj, conjugate_field(model, field.primal));
}

void check_paired(const GroupModel& model, const PairedField& field, double tol) {
  const double r = pairing_residual(model, field);
  if (!(r <= tol))
    throw InconsistentField("conjugate half does not match the primal half: residual " +
                            std::to_string(r));
}

CoefficientField sampled(const CoefficientField& field) {
  CoefficientField out;
  out.truncation = field.truncation;
  out.nt = field.nt;
  for (const auto& [mode, p] : field.modes) out.modes.emplace(mode, sample_profile(p, field.nt));
  return out;
}

CoefficientField linear_combination(double c1, const CoefficientField& f, double c2,
                                    const CoefficientField& g) {
  if (f.nt != g.nt) throw std::invalid_argument("linear_combination: grid sizes differ");
  CoefficientField out;
  out.truncation = f.truncation;
  out.nt = f.nt;
  for (const auto& mode : union_keys(f, g)) {
    const TimeProfile* a = find(f, mode);
    const TimeProfile* b = find(g, mode);
    if (series_or_absent(a) && series_or_absent(b))
      out.modes.emplace(mode, Complex(c1) * series_or_zero(a) + Complex(c2) * series_or_zero(b));
    else
      out.modes.emplace(mode, SampledProfile(c1 * samples_or_zero(a, f.nt) + c2 * samples_or_zero(b, f.nt)));
  }
  return out;
}

PairedField linear_combination(double c1, const PairedField& f, double c2, const PairedField& g) {
  return {linear_combination(c1, f.primal, c2, g.primal), linear_combination(c1, f.conj, c2, g.conj)};
}

double max_abs_difference(const CoefficientField& f, const CoefficientField& g) {
  const int nt = f.nt;
  double out = 0.0;
  for (const auto& mode : union_keys(f, g)) {
    const SampledProfile d = samples_or_zero(find(f, mode), nt) - samples_or_zero(find(g, mode), nt);
    out = std::max(out, d.cwiseAbs().maxCoeff());
  }
  return out;
}

double max_abs_difference(const PairedField& f, const PairedField& g) {
  return std::max(max_abs_difference(f.primal, g.primal), max_abs_difference(f.conj, g.conj));
}

double drift_phase(const std::vector<TrigPoly>& drift, const Eigen::VectorXd& mu, double t) {
  double phase = 0.0;
  for (std::size_t j = 0; j < drift.size(); ++j)
    if (mu[static_cast<Eigen::Index>(j)] != 0.0)
      phase += mu[static_cast<Eigen::Index>(j)] * antiderivative(drift[j]).periodic(t);
  return phase;
}

namespace {

// e^{sign i mu.P(t_j)} on the grid.
Eigen::VectorXcd psi_multiplier(const std::vector<SplitAntiderivative>& primitives,
                                const Eigen::VectorXd& mu, int nt, double sign) {
  Eigen::VectorXcd out(nt + 1);
  for (int j = 0; j <= nt; ++j) {
    const double t = 2.0 * M_PI * j / nt;
    double phase = 0.0;
    for (std::size_t f = 0; f < primitives.size(); ++f)
      phase += mu[static_cast<Eigen::Index>(f)] * primitives[f].periodic(t);
    out[j] = std::polar(1.0, sign * phase);
  }
  return out;
}

std::vector<SplitAntiderivative> drift_primitives(const GroupModel& model,
                                                  const std::vector<TrigPoly>& drift) {
  if (!drift.empty() && drift.size() != model.size())
    throw InvalidParameters("drift needs one p_j(t) per factor");
  std::vector<SplitAntiderivative> out;
  for (const auto& p : drift) out.push_back(antiderivative(p));
  return out;
}

}  // namespace

CoefficientField psi_conjugation(const GroupModel& model, const CoefficientField& field,
                                 const std::vector<TrigPoly>& drift, PsiDirection direction) {
  const auto primitives = drift_primitives(model, drift);
  const double sign = direction == PsiDirection::Forward ? -1.0 : 1.0;
  CoefficientField out;
  out.truncation = field.truncation;
  out.nt = field.nt;
  for (const auto& [mode, p] : field.modes) {
    SampledProfile v = sample_profile(p, field.nt);
    if (!primitives.empty())
      v = v.cwiseProduct(psi_multiplier(primitives, mode_scalars(model, mode).mu, field.nt, sign));
    out.modes.emplace(mode, std::move(v));
  }
  return out;
}

PairedField psi_conjugation(const GroupModel& model, const PairedField& field,
                            const std::vector<TrigPoly>& drift, PsiDirection direction) {
  return {psi_conjugation(model, field.primal, drift, direction),
          psi_conjugation(model, field.conj, drift, direction)};
}

PairedField apply_P(const VekuaParams& params, const PairedField& u) {
  const GroupModel& model = params.group;
  const int nt = u.primal.nt;
  if (u.conj.nt != nt) throw std::invalid_argument("apply_P: paired halves use different grids");
  PairedField out;
  out.primal.truncation = u.primal.truncation;
  out.conj.truncation = u.conj.truncation;
  out.primal.nt = out.conj.nt = nt;

  const ComplexSeries q = params.q.to_series();
  const ComplexSeries s = params.s.to_series();
  const Complex i(0.0, 1.0);
  const Complex alpha = params.alpha;

  for (const auto& mode : union_keys(u.primal, u.conj)) {
    const ModeScalars sc = mode_scalars(model, mode);
    // i mu.p(t) as a series.
    ComplexSeries drift_term = ComplexSeries::constant(i * sc.b);
    if (!params.drift.empty()) {
      drift_term = ComplexSeries();
      for (std::size_t j = 0; j < params.drift.size(); ++j)
        drift_term += (i * sc.mu[static_cast<Eigen::Index>(j)]) * params.drift[j].to_series();
    }
    const ComplexSeries cu = drift_term + Complex(-sc.a, params.delta) * q + s;
    const ComplexSeries cg = drift_term + Complex(sc.a, -params.delta) * q + s;

    const TimeProfile* pu = find(u.primal, mode);
    const TimeProfile* pg = find(u.conj, mode);
    if (series_or_absent(pu) && series_or_absent(pg)) {
      const ComplexSeries uh = series_or_zero(pu), gh = series_or_zero(pg);
      out.primal.modes.emplace(mode, derivative(uh) - cu * uh - alpha * (q * gh));
      out.conj.modes.emplace(mode, derivative(gh) - cg * gh - std::conj(alpha) * (q * uh));
    } else {
      const SampledProfile uh = samples_or_zero(pu, nt), gh = samples_or_zero(pg, nt);
      const SampledProfile qs = grid_samples(q, nt);
      const SampledProfile fu = spectral_derivative(uh) - grid_samples(cu, nt).cwiseProduct(uh) -
                                alpha * qs.cwiseProduct(gh);
      const SampledProfile fg = spectral_derivative(gh) - grid_samples(cg, nt).cwiseProduct(gh) -
                                std::conj(alpha) * qs.cwiseProduct(uh);
      out.primal.modes.emplace(mode, fu);
      out.conj.modes.emplace(mode, fg);
    }
  }
  return out;
}

}  // namespace vekua
