#include "vekua/run.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <set>
#include <ostream>
#include <sstream>

#include "vekua/acceptance.hpp"
#include "vekua/conditions.hpp"
#include "vekua/field_io.hpp"
#include "vekua/sampling.hpp"
#include "vekua/shooting.hpp"
#include "vekua/solve.hpp"

namespace vekua {

using ojson = nlohmann::ordered_json;

namespace {

ojson num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

ojson cnum(Complex z) { return ojson::array({num(z.real()), num(z.imag())}); }

ojson from_json(const nlohmann::json& j) { return ojson::parse(j.dump()); }

ojson mode_json(const ModeIndex& m) { return from_json(mode_to_json(m)); }

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

ojson constants_json(const GlobalConstants& c) {
  ojson lam = ojson::array(), p0 = ojson::array();
  for (double v : c.lambda) lam.push_back(num(v));
  for (double v : c.p0) p0.push_back(num(v));
  return {{"A0", cnum(c.A0)}, {"B0", cnum(c.B0)}, {"abs_A0", num(std::abs(c.A0))}, {"abs_B0", num(std::abs(c.B0))},
          {"s0", num(c.s0)},  {"q0", num(c.q0)},  {"delta", num(c.delta)},        {"alpha", cnum(c.alpha)},
          {"lambda", lam},    {"p0", p0}};
}

ojson resonance_json(const ResonanceSearch& s, const std::vector<ModeIndex>& modes) {
  ojson hits = ojson::array();
  for (const auto& h : s.hits)
    hits.push_back({{"mode", mode_json(modes[h.spectrum_index])},
                    {"k", h.k},
                    {"a", num(h.a)},
                    {"b", num(h.b)},
                    {"r1", num(h.r1)},
                    {"r2", num(h.r2)},
                    {"root_distance", num(h.root_distance)}});
  return {{"k_bound", s.k_bound},
          {"hit_count", s.hits.size()},
          {"bruteforce_count", s.bruteforce_count},
          {"paths_agree", s.paths_agree},
          {"hits", hits}};
}

ojson diophantine_json(const DiophantineReport& r, const std::vector<ModeIndex>& modes) {
  ojson rows = ojson::array();
  for (const auto& row : r.rows)
    rows.push_back({{"weight", num(row.weight)}, {"min_value", num(row.min_value)}, {"argmin", mode_json(modes[row.argmin])}});
  ojson out = {{"kind", to_string(r.kind)}, {"M", num(r.M)}, {"holds", r.holds}, {"certified", r.certified},
               {"note", r.note}};
  out["M_hat"] = r.M_hat ? num(*r.M_hat) : ojson(nullptr);
  out["fit_residual"] = num(r.fit_residual);
  out["residue_min"] = r.residue_min ? num(*r.residue_min) : ojson(nullptr);
  if (r.witness)
    out["witness"] = {{"mode", mode_json(r.witness->mode)},
                      {"weight", num(r.witness->weight)},
                      {"value", num(r.witness->value)},
                      {"bound", num(r.witness->bound)}};
  else
    out["witness"] = nullptr;
  out["rows"] = rows;
  return out;
}

ojson decay_json(const DecayDiagnostic& d) {
  ojson table = ojson::array(), fits = ojson::array();
  for (const auto& r : d.table) table.push_back({{"weight", num(r.weight)}, {"beta", r.beta}, {"supnorm", num(r.supnorm)}});
  for (const auto& f : d.fits)
    fits.push_back({{"beta", f.beta},
                    {"slope", f.slope ? num(*f.slope) : ojson(nullptr)},
                    {"residual", num(f.residual)},
                    {"bins_used", f.bins_used},
                    {"smooth_compatible", f.smooth_compatible}});
  return {{"smooth_compatible", d.smooth_compatible}, {"max_poly_order", d.max_poly_order}, {"note", d.note},
          {"fits", fits},
          {"table", table}};
}

std::string resolve(const std::string& base_dir, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? p : (std::filesystem::path(base_dir) / path).string();
}

PairedField load_forcing(const RunConfig& cfg, const std::string& base_dir) {
  const ForcingSpec& spec = *cfg.forcing;
  const FieldDocument doc =
      spec.path ? read_field(resolve(base_dir, *spec.path), cfg.params.group, cfg.truncation, cfg.nt)
                : field_from_json(*spec.inline_field, cfg.params.group, cfg.truncation, cfg.nt, "$.forcing.field");
  if (doc.conj) return {doc.primal, *doc.conj};
  return pair_with_conjugate(cfg.params.group, doc.primal);
}

struct Context {
  const RunConfig& cfg;
  std::string base_dir;
  std::ostream* progress;
  RunOutcome& out;

  void write(const std::string& suffix, const std::string& text) {
    const std::string file = cfg.output_prefix + suffix;
    write_text(file, text);
    out.files.push_back(file);
  }
};

ojson task_solve(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const PairedField f = load_forcing(cfg, ctx.base_dir);
  const SolveReport rep = solve_field(cfg.params, f, cfg.solver);
  const GroupModel& g = cfg.params.group;

  ctx.write("solution.json", field_to_json(g, rep.solution.primal, &rep.solution.conj).dump(1) + "\n");
  if (rep.fit) ctx.write("solution_fit.json", field_to_json(g, rep.fit->primal, &rep.fit->conj).dump(1) + "\n");
  if (cfg.decay_csv) {
    std::ostringstream csv;
    write_decay_csv(csv, rep.decay);
    ctx.write("decay.csv", csv.str());
  }

  ojson modes = ojson::array();
  double min_d = std::numeric_limits<double>::infinity();
  for (const auto& m : rep.modes) {
    min_d = std::min({min_d, m.abs_D1, m.abs_D2});
    modes.push_back({{"mode", mode_json(m.mode)},
                     {"weight", num(m.weight)},
                     {"abs_D1", num(m.abs_D1)},
                     {"abs_D2", num(m.abs_D2)},
                     {"subpanels", m.subpanels},
                     {"max_exponent_real", num(m.max_exponent_real)},
                     {"boundary_residual", num(m.boundary_residual)}});
  }
  ctx.out.summary = "solved " + std::to_string(rep.modes.size()) + " modes, residual " + sci(rep.residual_max);
  return {{"nt", f.primal.nt},
          {"forcing_modes", f.primal.modes.size()},
          {"residual_max", num(rep.residual_max)},
          {"residual_l2", num(rep.residual_l2)},
          {"pairing_residual", num(rep.pairing_residual)},
          {"max_exponent_real", num(rep.max_exponent_real)},
          {"min_denominator", num(min_d)},
          {"modes", modes},
          {"decay", decay_json(rep.decay)}};
}

ojson task_classify(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const VekuaParams& p = cfg.params;
  if (violates_hypothesis_one(p)) throw HypothesisViolation("|alpha| = |delta|: hypothesis (I) fails");
  const auto modes = enumerate_spectrum(p.group, cfg.truncation);
  const GlobalConstants c = global_constants(p);
  ojson out;
  bool all_lambda_zero = true;
  for (double l : c.lambda) all_lambda_zero = all_lambda_zero && l == 0.0;
  if (all_lambda_zero) {
    const Lambda0Classification cls = classify_lambda0(p, cfg.truncation, cfg.k_bound, cfg.diophantine_M);
    out["regime"] = "lambda = 0";
    out["case"] = cls.case_number;
    out["verdict"] = cls.verdict;
    out["solvable"] = cls.solvable;
    out["certified"] = cls.certified;
    out["constants"] = constants_json(cls.constants);
    out["resonances"] = cls.resonances ? resonance_json(*cls.resonances, modes) : ojson(nullptr);
    out["diophantine"] = cls.diophantine ? diophantine_json(*cls.diophantine, modes) : ojson(nullptr);
    ctx.out.summary = cls.verdict;
    return out;
  }
  // General lambda: (I), (II) and (III) up to the truncation.
  const ResonanceSearch res = find_resonances(c, mode_scalars(p.group, modes), cfg.k_bound);
  const DiophantineReport iii = diophantine_check(p, cfg.truncation, DiophantineKind::III, cfg.diophantine_M);
  const bool solvable = res.hits.empty() && iii.holds;
  std::string verdict = solvable ? "solvable" : "not solvable";
  if (!iii.certified || solvable) verdict += " (up to the truncation)";
  out["regime"] = "general";
  out["case"] = nullptr;
  out["verdict"] = verdict;
  out["solvable"] = solvable;
  out["certified"] = !solvable && !res.hits.empty();
  out["constants"] = constants_json(c);
  out["resonances"] = resonance_json(res, modes);
  out["diophantine"] = diophantine_json(iii, modes);
  ctx.out.summary = verdict;
  return out;
}

ojson task_resonances(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const auto modes = enumerate_spectrum(cfg.params.group, cfg.truncation);
  const GlobalConstants c = global_constants(cfg.params);
  const ResonanceSearch res = find_resonances(c, mode_scalars(cfg.params.group, modes), cfg.k_bound);
  std::set<long> ks;
  for (const auto& h : res.hits) ks.insert(h.k);
  ojson distinct = ojson::array();
  for (long k : ks) distinct.push_back(k);
  ctx.out.summary = std::to_string(res.hits.size()) + " resonance hits over " + std::to_string(modes.size()) + " modes";
  ojson out = {{"modes_scanned", modes.size()}, {"distinct_k", distinct}, {"constants", constants_json(c)}};
  const ojson hits = resonance_json(res, modes);
  for (const auto& [k, v] : hits.items()) out[k] = v;
  return out;
}

ojson task_diophantine(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const VekuaParams& p = cfg.params;
  const auto modes = enumerate_spectrum(p.group, cfg.truncation);
  const GlobalConstants c = global_constants(p);
  ojson out;
  const DiophantineReport iii = diophantine_check(p, cfg.truncation, DiophantineKind::III, cfg.diophantine_M);
  out["III"] = diophantine_json(iii, modes);
  const bool dc_applies = std::abs(c.alpha) < std::abs(c.delta) && std::abs(c.s0) <= kZeroS0;
  out["dc_applicable"] = dc_applies;
  if (dc_applies) {
    const DcEquivalenceReport eq = dc_prime_equivalence(p, cfg.truncation, cfg.diophantine_M);
    out["DC"] = diophantine_json(eq.dc, modes);
    out["DC_prime"] = diophantine_json(eq.dc_prime, modes);
    ojson ladder = ojson::array();
    for (double m : eq.ladder) ladder.push_back(num(m));
    out["equivalence"] = {{"identity_residual", num(eq.identity_residual)},
                          {"bound_violation", num(eq.bound_violation)},
                          {"M_shifted", num(eq.M_shifted)},
                          {"dc_prime_at_shifted", eq.dc_prime_at_shifted},
                          {"dc_prime_implies_dc", eq.dc_prime_implies_dc},
                          {"dc_implies_dc_prime_shifted", eq.dc_implies_dc_prime_shifted},
                          {"ladder", ladder},
                          {"dc_exists_on_ladder", eq.dc_exists_on_ladder},
                          {"dc_prime_exists_on_ladder", eq.dc_prime_exists_on_ladder},
                          {"agree", eq.agree}};
    ctx.out.summary = std::string("III ") + (iii.holds ? "holds" : "fails") + ", DC " +
                      (eq.dc.holds ? "holds" : "fails") + ", DC' " + (eq.dc_prime.holds ? "holds" : "fails");
  } else {
    out["DC"] = nullptr;
    out["DC_prime"] = nullptr;
    out["equivalence"] = nullptr;
    out["dc_note"] = "DC and DC' need |alpha| < |delta| and s0 = 0";
    ctx.out.summary = std::string("III ") + (iii.holds ? "holds" : "fails");
  }
  return out;
}

ojson task_oracle(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const GroupModel& g = cfg.params.group;
  PairedField f;
  if (cfg.forcing) {
    f = load_forcing(cfg, ctx.base_dir);
  } else {
    CoefficientField unit;
    unit.truncation = cfg.truncation;
    unit.nt = cfg.nt;
    for (const auto& m : enumerate_modes(g, cfg.truncation)) unit.modes.emplace(m, ComplexSeries::constant(1.0));
    f = pair_with_conjugate(g, unit);
  }
  SolveOptions opt = cfg.solver;
  opt.decay_orders.clear();
  const SolveReport rep = solve_field(cfg.params, f, opt);
  const int nt = f.primal.nt;
  const int stride = std::max(1, nt / 16);
  auto as_series = [&](const CoefficientField& fld, const ModeIndex& m) {
    const auto it = fld.modes.find(m);
    if (it == fld.modes.end()) return ComplexSeries();
    if (const auto* s = std::get_if<ComplexSeries>(&it->second)) return *s;
    return series_from_samples(std::get<SampledProfile>(it->second));
  };

  ojson rows = ojson::array();
  double worst = 0.0;
  for (const auto& [mode, prof] : rep.solution.primal.modes) {
    const ShootingResult shot = oracle_shooting(cfg.params, mode_scalars(g, mode), as_series(f.primal, mode),
                                                as_series(f.conj, mode), nt);
    const SampledProfile w1 = sample_profile(prof, nt);
    const SampledProfile w2 = sample_profile(rep.solution.conj.modes.at(mode), nt);
    const double scale = std::max({shot.w1.cwiseAbs().maxCoeff(), shot.w2.cwiseAbs().maxCoeff(), 1e-300});
    const double dev = std::max((w1 - shot.w1).cwiseAbs().maxCoeff(), (w2 - shot.w2).cwiseAbs().maxCoeff()) / scale;
    worst = std::max(worst, dev);
    ojson table = ojson::array();
    for (int j = 0; j <= nt; j += stride)
      table.push_back({{"t", num(2.0 * M_PI * j / nt)},
                       {"closed_form", cnum(w1[j])},
                       {"shooting", cnum(shot.w1[j])},
                       {"closed_form_conj", cnum(w2[j])},
                       {"shooting_conj", cnum(shot.w2[j])}});
    rows.push_back({{"mode", mode_json(mode)},
                    {"relative_deviation", num(dev)},
                    {"abs_det_I_minus_monodromy", num(std::abs(shot.det_I_minus_monodromy))},
                    {"rk4_steps", shot.steps},
                    {"table", table}});
  }
  ctx.out.summary = std::to_string(rows.size()) + " modes, max relative deviation " + sci(worst);
  return {{"nt", nt}, {"forcing", cfg.forcing ? "configured" : "unit f-hat at every mode"},
          {"max_relative_deviation", num(worst)}, {"modes", rows}};
}

ojson task_selftest(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  ojson crit = ojson::array();
  int failed = 0;
  for (int id = 1; id <= 9; ++id) {
    const CriterionResult r = acceptance_criterion(id, cfg.selftest_scale, cfg.solver.threads);
    if (ctx.progress) *ctx.progress << format_result(r) << std::endl;
    failed += !r.passed;
    crit.push_back({{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}});
  }
  if (failed) ctx.out.exit_code = kExitSelftestFailed;
  ctx.out.summary = failed ? std::to_string(failed) + " of 9 criteria failed" : "all 9 criteria passed";
  return {{"scale", num(cfg.selftest_scale)}, {"failed", failed}, {"criteria", crit}};
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
  if (dynamic_cast<const FileError*>(&e)) return "FileError";
  if (dynamic_cast<const DegenerateRho*>(&e)) return "DegenerateRho";
  if (dynamic_cast<const HypothesisViolation*>(&e)) return "HypothesisViolation";
  if (dynamic_cast<const ResonantMode*>(&e)) return "ResonantMode";
  if (dynamic_cast<const SingularMonodromy*>(&e)) return "SingularMonodromy";
  if (dynamic_cast<const TruncationAsymmetry*>(&e)) return "TruncationAsymmetry";
  if (dynamic_cast<const InconsistentField*>(&e)) return "InconsistentField";
  if (dynamic_cast<const QuadratureFailure*>(&e)) return "QuadratureFailure";
  if (dynamic_cast<const InvalidParameters*>(&e)) return "InvalidParameters";
  return "Error";
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const FileError*>(&e)) return kExitFile;
  if (dynamic_cast<const HypothesisViolation*>(&e)) return kExitHypothesis;
  if (dynamic_cast<const ResonantMode*>(&e) || dynamic_cast<const SingularMonodromy*>(&e)) return kExitResonance;
  if (dynamic_cast<const TruncationAsymmetry*>(&e)) return kExitTruncationAsymmetry;
  if (dynamic_cast<const InvalidParameters*>(&e) || dynamic_cast<const InconsistentField*>(&e)) return kExitConfig;
  return kExitNumerical;
}

std::string exit_code_table() {
  return "Exit codes:\n"
         "  0  success (resonances and diophantine report findings with 0)\n"
         "  1  selftest: at least one acceptance criterion failed\n"
         "  2  configuration error (schema, alpha = 0, inconsistent forcing field)\n"
         "  3  hypothesis violation (|alpha| = |delta|)\n"
         "  4  resonance (a boundary denominator vanishes at some mode)\n"
         "  5  numerical failure (quadrature refinement limit, other solver errors)\n"
         "  6  truncation asymmetry (a conjugate mode lies outside the truncation)\n"
         "  7  file error (unreadable forcing, unwritable output)\n";
}

RunOutcome run(const RunConfig& cfg, const std::string& base_dir, std::ostream* progress) {
  RunOutcome out;
  Context ctx{cfg, base_dir, progress, out};
  ojson& rep = out.report;
  rep["generated_at"] = timestamp();
  rep["task"] = to_string(cfg.task);
  rep["config_sha256"] = sha256_hex(cfg.effective.dump());
  rep["truncation"] = cfg.truncation;
  rep["nt"] = cfg.nt;
  rep["config"] = from_json(cfg.effective);
  try {
    ojson result;
    switch (cfg.task) {
      case Task::Solve: result = task_solve(ctx); break;
      case Task::Classify: result = task_classify(ctx); break;
      case Task::Resonances: result = task_resonances(ctx); break;
      case Task::Diophantine: result = task_diophantine(ctx); break;
      case Task::Oracle: result = task_oracle(ctx); break;
      case Task::Selftest: result = task_selftest(ctx); break;
    }
    rep["status"] = out.exit_code == kExitOk ? "ok" : "failed";
    rep["result"] = std::move(result);
  } catch (const std::exception& e) {
    out.exit_code = exit_code_for(e);
    out.summary = error_kind(e) + ": " + e.what();
    rep["status"] = "error";
    ojson err = {{"type", error_kind(e)}, {"message", e.what()}};
    if (const auto* r = dynamic_cast<const ResonantMode*>(&e)) {
      err["mode"] = r->mode();
      err["abs_D1"] = num(r->abs_d1());
      err["abs_D2"] = num(r->abs_d2());
    }
    rep["error"] = std::move(err);
  }
  rep["exit_code"] = out.exit_code;
  try {
    const std::string file = cfg.output_prefix + to_string(cfg.task) + "_report.json";
    write_text(file, rep.dump(2) + "\n");
    out.files.push_back(file);
  } catch (const FileError& e) {
    if (out.exit_code == kExitOk) out.exit_code = kExitFile;
    out.summary += std::string(out.summary.empty() ? "" : "; ") + e.what();
  }
  return out;
}

std::string report_body(const ojson& report) {
  ojson copy = report;
  copy.erase("generated_at");
  return copy.dump(2);
}

}  // namespace vekua
