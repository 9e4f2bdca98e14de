#include "vekua/solve.hpp"

#include <cmath>
#include <map>
#include <set>

#include "vekua/errors.hpp"
#include "vekua/parallel.hpp"
#include "vekua/sampling.hpp"

namespace vekua {

namespace {

// Highest frequency carrying a coefficient above 1e-14 of the largest.
int effective_degree(const ComplexSeries& s) {
  const double cut = 1e-14 * s.max_abs_coeff();
  for (int j = s.degree(); j > 0; --j)
    if (std::abs(s.coeff(j)) > cut || std::abs(s.coeff(-j)) > cut) return j;
  return 0;
}

ComplexSeries as_series(const TimeProfile* p) {
  if (!p) return ComplexSeries();
  if (const auto* s = std::get_if<ComplexSeries>(p)) return *s;
  return series_from_samples(std::get<SampledProfile>(*p));
}

struct ModeTask {
  ModeIndex mode;
  ModeScalars scalars;
  ModeSystem system;
  ComplexSeries F1;
  ComplexSeries F2;
  int subpanels = 1;
};

}  // namespace

SolveReport solve_field(const VekuaParams& params, const PairedField& f, const SolveOptions& options) {
  validate(params);
  if (violates_hypothesis_one(params))
    throw HypothesisViolation("|alpha| = |delta|: hypothesis (I) fails");
  const GroupModel& model = params.group;
  validate(model, f.primal);
  validate(model, f.conj);
  const int nt = f.primal.nt;
  if (f.conj.nt != nt) throw InvalidParameters("paired halves use different grids");

  SolveReport report;
  report.pairing_residual = pairing_residual(model, f);
  if (!(report.pairing_residual <= options.pairing_tolerance))
    throw InconsistentField("forcing halves are not conjugation-consistent: residual " +
                            std::to_string(report.pairing_residual));

  const OperatorConstants constants = operator_constants(params);
  const TimeIntegrals integrals = time_integrals(params);

  std::set<ModeIndex> keys;
  for (const auto& kv : f.primal.modes) keys.insert(kv.first);
  for (const auto& kv : f.conj.modes) keys.insert(kv.first);

  std::vector<SplitAntiderivative> drift_primitives;
  std::vector<double> drift_osc;  // sup |p_j - p0_j|
  for (const auto& p : params.drift) {
    drift_primitives.push_back(antiderivative(p));
    drift_osc.push_back(TrigPoly(0.0, p.harmonics()).abs_bound());
  }

  std::vector<ModeTask> tasks;
  for (const auto& mode : keys) {
    ModeTask task;
    task.mode = mode;
    task.scalars = mode_scalars(model, mode);
    task.system = build_mode_system(constants, task.scalars, false);
    const double tol = resonance_tolerance(constants.s0);
    if (std::abs(task.system.D1) < tol || std::abs(task.system.D2) < tol)
      report.resonant_modes.push_back(to_string(mode));
    const auto p1 = f.primal.modes.find(mode);
    const auto p2 = f.conj.modes.find(mode);
    task.F1 = as_series(p1 == f.primal.modes.end() ? nullptr : &p1->second);
    task.F2 = as_series(p2 == f.conj.modes.end() ? nullptr : &p2->second);
    double degree = std::max(effective_degree(task.F1), effective_degree(task.F2));
    for (std::size_t j = 0; j < drift_osc.size(); ++j)
      degree += std::abs(task.scalars.mu[static_cast<Eigen::Index>(j)]) * drift_osc[j];
    if (options.fixed_subpanels > 0) {
      task.subpanels = options.fixed_subpanels;
    } else {
      task.subpanels = required_subpanels(task.system, integrals, nt, static_cast<int>(std::ceil(degree)));
      if (task.subpanels > options.max_subpanels)
        throw QuadratureFailure("mode " + to_string(mode) + " needs " + std::to_string(task.subpanels) +
                                " sub-panels per interval (limit " +
                                std::to_string(options.max_subpanels) + "); increase nt");
    }
    tasks.push_back(std::move(task));
  }
  if (!report.resonant_modes.empty()) {
    const ModeTask* first = nullptr;
    for (const auto& t : tasks)
      if (to_string(t.mode) == report.resonant_modes.front()) first = &t;
    throw ResonantMode(report.resonant_modes.front() +
                           (report.resonant_modes.size() > 1
                                ? " (and " + std::to_string(report.resonant_modes.size() - 1) + " more)"
                                : ""),
                       std::abs(first->system.D1), std::abs(first->system.D2));
  }

  std::map<int, QuadratureGrid> grids;
  for (const auto& t : tasks)
    if (!grids.count(t.subpanels)) grids.emplace(t.subpanels, make_quadrature_grid(integrals, nt, t.subpanels));

  std::vector<ModeSolution> solutions(tasks.size());
  parallel_for(tasks.size(), options.threads, [&](std::size_t i) {
    const ModeTask& t = tasks[i];
    const QuadratureGrid& grid = grids.at(t.subpanels);
    const Eigen::Index count = grid.nodes.size();
    Eigen::VectorXcd g1(count), g2(count);
    for (Eigen::Index n = 0; n < count; ++n) {
      const double sigma = grid.nodes[n];
      Complex psi = 1.0;
      if (!drift_primitives.empty()) {
        double phase = 0.0;
        for (std::size_t j = 0; j < drift_primitives.size(); ++j)
          phase += t.scalars.mu[static_cast<Eigen::Index>(j)] * drift_primitives[j].periodic(sigma);
        psi = std::polar(1.0, -phase);
      }
      const Eigen::Vector2cd G = t.system.Tinv * (psi * Eigen::Vector2cd(t.F1(sigma), t.F2(sigma)));
      g1[n] = G[0];
      g2[n] = G[1];
    }
    ModeSolution sol = solve_mode(t.system, g1, g2, grid);
    if (!drift_primitives.empty()) {
      for (int j = 0; j <= nt; ++j) {
        double phase = 0.0;
        for (std::size_t k = 0; k < drift_primitives.size(); ++k)
          phase += t.scalars.mu[static_cast<Eigen::Index>(k)] * drift_primitives[k].periodic(grid.t[j]);
        const Complex back = std::polar(1.0, phase);
        sol.w1[j] *= back;
        sol.w2[j] *= back;
      }
    }
    solutions[i] = std::move(sol);
  });

  report.solution.primal.truncation = f.primal.truncation;
  report.solution.conj.truncation = f.conj.truncation;
  report.solution.primal.nt = report.solution.conj.nt = nt;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const ModeTask& t = tasks[i];
    ModeSolution& sol = solutions[i];
    ModeReport mr;
    mr.mode = t.mode;
    mr.weight = t.scalars.weight;
    mr.abs_D1 = std::abs(t.system.D1);
    mr.abs_D2 = std::abs(t.system.D2);
    mr.subpanels = t.subpanels;
    mr.max_exponent_real = sol.max_exponent_real;
    mr.boundary_residual = twisted_boundary_residual(t.system, sol);
    report.max_exponent_real = std::max(report.max_exponent_real, sol.max_exponent_real);
    report.modes.push_back(mr);
    report.solution.primal.modes.emplace(t.mode, std::move(sol.w1));
    report.solution.conj.modes.emplace(t.mode, std::move(sol.w2));
  }

  // Residual from the sampled solution with spectral differentiation.
  const PairedField Pu = apply_P(params, report.solution);
  const PairedField fs{sampled(f.primal), sampled(f.conj)};
  double sum2 = 0.0;
  std::size_t count = 0;
  for (auto half : {&PairedField::primal, &PairedField::conj}) {
    const CoefficientField diff = linear_combination(1.0, Pu.*half, -1.0, fs.*half);
    for (const auto& [mode, p] : diff.modes) {
      const SampledProfile& v = std::get<SampledProfile>(p);
      report.residual_max = std::max(report.residual_max, v.cwiseAbs().maxCoeff());
      sum2 += v.head(nt).squaredNorm();
      count += static_cast<std::size_t>(nt);
    }
  }
  report.residual_l2 = count ? std::sqrt(sum2 / static_cast<double>(count)) : 0.0;

  if (options.emit_fit) {
    PairedField fit;
    fit.primal.truncation = report.solution.primal.truncation;
    fit.conj.truncation = report.solution.conj.truncation;
    fit.primal.nt = fit.conj.nt = nt;
    const int degree = nt / 2 - 1;
    for (const auto& [mode, p] : report.solution.primal.modes)
      fit.primal.modes.emplace(mode, fit_series(std::get<SampledProfile>(p), degree));
    for (const auto& [mode, p] : report.solution.conj.modes)
      fit.conj.modes.emplace(mode, fit_series(std::get<SampledProfile>(p), degree));
    report.fit = std::move(fit);
  }

  report.decay = decay_diagnostic(model, report.solution.primal, options.decay_orders);
  return report;
}

SolveReport solve_field(const VekuaParams& params, const CoefficientField& f,
                        const SolveOptions& options) {
  return solve_field(params, pair_with_conjugate(params.group, f), options);
}

}  // namespace vekua
