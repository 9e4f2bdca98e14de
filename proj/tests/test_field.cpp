#include <cmath>
#include <random>

#include "doctest.h"
#include "test_support.hpp"
#include "vekua/decay.hpp"
#include "vekua/errors.hpp"
#include "vekua/field.hpp"
#include "vekua/solve.hpp"

using namespace vekua;

namespace {

GroupModel circle(double lambda = 0.0, double p0 = 0.0) { return {{{FactorKind::Circle}}, {lambda}, {p0}}; }
GroupModel su2(double lambda = 0.0, double p0 = 0.0) { return {{{FactorKind::SU2}}, {lambda}, {p0}}; }
GroupModel product(double l1, double l2, double p1, double p2) {
  return {{{FactorKind::Circle}, {FactorKind::SU2}}, {l1, l2}, {p1, p2}};
}

ModeIndex k_mode(int k) { return {{CircleMode{k}}}; }

VekuaParams params_for(GroupModel g, double delta, Complex alpha, TrigPoly s, TrigPoly q) {
  VekuaParams p;
  p.group = std::move(g);
  p.delta = delta;
  p.alpha = alpha;
  p.s = std::move(s);
  p.q = std::move(q);
  return p;
}

// |B0| > |A0| with lambda = 0 would need lambda = 0; this uses lambda != 0 too.
VekuaParams case1_params(GroupModel g) {
  return params_for(std::move(g), 0.5, 2.0, TrigPoly(0.0, {{1, 0.1, 0.0}}),
                    TrigPoly(1.0, {{1, 0.5, 0.0}}));
}

PairedField manufactured(std::mt19937_64& rng, const GroupModel& g, const Truncation& t, int degree,
                         int nt) {
  return pair_with_conjugate(g, testing::random_field(rng, g, t, degree, nt));
}

}  // namespace

TEST_CASE("conjugate_field examples") {
  const GroupModel g = circle();
  CoefficientField real;
  real.truncation = {2};
  real.nt = 16;
  std::mt19937_64 rng(1);
  for (int k = 0; k <= 2; ++k) {
    const ComplexSeries c = testing::random_series(rng, 2);
    real.modes.emplace(k_mode(k), c);
    if (k != 0) real.modes.emplace(k_mode(-k), conj(c));
  }
  // The k = 0 profile must itself be real-valued.
  real.modes[k_mode(0)] = 0.5 * (std::get<ComplexSeries>(real.modes[k_mode(0)]) +
                                 conj(std::get<ComplexSeries>(real.modes[k_mode(0)])));
  CHECK(max_abs_difference(conjugate_field(g, real), real) < 1e-15);

  CoefficientField single;
  single.truncation = {1};
  single.nt = 8;
  single.modes.emplace(k_mode(1), ComplexSeries::constant(1.0));
  const auto c = conjugate_field(g, single);
  REQUIRE(c.modes.size() == 1);
  CHECK(c.modes.count(k_mode(-1)) == 1);
  CHECK(std::abs(std::get<ComplexSeries>(c.modes.at(k_mode(-1))).coeff(0) - 1.0) == 0.0);

  CoefficientField outside;
  outside.truncation = {1};
  outside.modes.emplace(k_mode(2), ComplexSeries::constant(1.0));
  CHECK_THROWS_AS(conjugate_field(g, outside), TruncationAsymmetry);
}

TEST_CASE("conjugate_field is an involution") {
  std::mt19937_64 rng(2);
  const GroupModel g = product(0.3, 0.8, 0.2, 0.4);
  for (int trial = 0; trial < 20; ++trial) {
    CoefficientField f = testing::random_field(rng, g, {2, 3}, 3, 32);
    if (trial % 2) f = sampled(f);
    CHECK(max_abs_difference(conjugate_field(g, conjugate_field(g, f)), f) < 1e-12);
    CHECK(pairing_residual(g, pair_with_conjugate(g, f)) == 0.0);
  }
}

TEST_CASE("inconsistent pairs are rejected") {
  std::mt19937_64 rng(3);
  const GroupModel g = su2();
  PairedField f = manufactured(rng, g, {2}, 2, 32);
  std::get<ComplexSeries>(f.conj.modes.begin()->second).coeff_ref(0) += 1e-6;
  CHECK_THROWS_AS(check_paired(g, f), InconsistentField);
  CHECK_THROWS_AS(solve_field(case1_params(g), f), InconsistentField);
}

TEST_CASE("psi conjugation") {
  std::mt19937_64 rng(4);
  const GroupModel g = product(0.0, 0.0, 0.5, -0.3);
  const CoefficientField f = testing::random_field(rng, g, {2, 2}, 3, 64);

  const std::vector<TrigPoly> flat{TrigPoly(0.5), TrigPoly(-0.3)};
  CHECK(max_abs_difference(psi_conjugation(g, f, flat, PsiDirection::Forward), f) < 1e-14);

  const std::vector<TrigPoly> drift{TrigPoly(0.5, {{1, 0.7, -0.2}, {3, 0.1, 0.0}}),
                                    TrigPoly(-0.3, {{2, 0.4, 0.3}})};
  const auto fwd = psi_conjugation(g, f, drift, PsiDirection::Forward);
  CHECK(max_abs_difference(psi_conjugation(g, fwd, drift, PsiDirection::Inverse), f) < 1e-12);

  // mu = 0 modes (k = 0, m = 0) are untouched.
  for (const auto& [mode, p] : f.modes) {
    if (mode_scalars(g, mode).mu.cwiseAbs().maxCoeff() != 0.0) continue;
    CHECK((std::get<SampledProfile>(fwd.modes.at(mode)) - sample_profile(p, 64)).cwiseAbs().maxCoeff() <
          1e-15);
  }
}

TEST_CASE("psi intertwines L with its normal form") {
  std::mt19937_64 rng(5);
  const GroupModel g = product(0.4, -0.7, 0.5, 0.25);
  for (int trial = 0; trial < 5; ++trial) {
    VekuaParams with_drift = params_for(g, 0.3, Complex(1.2, 0.4), testing::random_trig(rng, 2, 0.1, 0.3),
                                        testing::random_positive_trig(rng, 2, 1.0));
    with_drift.drift = {testing::random_trig(rng, 2, 0.5, 0.5), testing::random_trig(rng, 3, 0.25, 0.4)};
    VekuaParams normal = with_drift;
    normal.drift.clear();
    const PairedField u = manufactured(rng, g, {2, 2}, 3, 256);
    const PairedField lhs = apply_P(normal, psi_conjugation(g, u, with_drift.drift, PsiDirection::Forward));
    const PairedField rhs = psi_conjugation(g, apply_P(with_drift, u), with_drift.drift, PsiDirection::Forward);
    CHECK(max_abs_difference(lhs, rhs) < 1e-9);
  }
}

TEST_CASE("apply_P examples") {
  const GroupModel g = circle();
  const VekuaParams p = params_for(g, 0.8, Complex(0.3, -1.1), TrigPoly(0.0), TrigPoly(1.0));
  PairedField zero;
  zero.primal.truncation = zero.conj.truncation = {1};
  zero.primal.nt = zero.conj.nt = 16;
  CHECK(apply_P(p, zero).primal.modes.empty());

  PairedField one = zero;
  const Complex c(0.4, 0.9), gc(-0.2, 0.5);
  one.primal.modes.emplace(k_mode(0), ComplexSeries::constant(c));
  one.conj.modes.emplace(k_mode(0), ComplexSeries::constant(gc));
  const PairedField f = apply_P(p, one);
  const Complex expected = -Complex(0, 0.8) * c - p.alpha * gc;
  CHECK(std::abs(std::get<ComplexSeries>(f.primal.modes.at(k_mode(0))).coeff(0) - expected) < 1e-15);

  // Sampled input agrees with the exact series path.
  std::mt19937_64 rng(6);
  const PairedField u = manufactured(rng, su2(0.6, 0.3), {3}, 4, 64);
  const VekuaParams ps = params_for(su2(0.6, 0.3), 0.8, Complex(0.3, -1.1), TrigPoly(0.2, {{1, 0.1, 0.2}}),
                                    TrigPoly(1.0, {{2, 0.3, 0.0}}));
  const PairedField exact = apply_P(ps, u);
  const PairedField spectral = apply_P(ps, {sampled(u.primal), sampled(u.conj)});
  CHECK(max_abs_difference(exact, spectral) < 1e-11);
}

TEST_CASE("solve_field: zero forcing gives zero") {
  const GroupModel g = su2(0.5, 0.2);
  PairedField f;
  f.primal.truncation = f.conj.truncation = {2};
  f.primal.nt = f.conj.nt = 32;
  for (const auto& m : enumerate_modes(g, {2})) {
    f.primal.modes.emplace(m, ComplexSeries());
    f.conj.modes.emplace(m, ComplexSeries());
  }
  const SolveReport r = solve_field(case1_params(g), f);
  CHECK(r.residual_max == 0.0);
  for (const auto& [m, p] : r.solution.primal.modes) CHECK(std::get<SampledProfile>(p).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("solve_field manufactured round trip") {
  std::mt19937_64 rng(7);
  const GroupModel g = product(0.0, 0.0, 0.35, 0.6);
  const VekuaParams p = case1_params(g);
  for (int trial = 0; trial < 3; ++trial) {
    const PairedField u = manufactured(rng, g, {2, 4}, 4, 128);
    const PairedField f = apply_P(p, u);
    const SolveReport r = solve_field(p, f);
    CHECK(max_abs_difference(r.solution, u) < 1e-7);
    CHECK(r.residual_max < 1e-8);
    CHECK(pairing_residual(g, r.solution) < 1e-8);
    CHECK(r.max_exponent_real <= 1e-12);
    for (const auto& [mode, prof] : r.solution.primal.modes) {
      const auto& v = std::get<SampledProfile>(prof);
      CHECK(std::abs(v[0] - v[v.size() - 1]) < 1e-8);
    }
  }
}

TEST_CASE("solve_field with a drift recovers the manufactured solution") {
  std::mt19937_64 rng(8);
  const GroupModel g = product(0.5, -0.3, 0.35, 0.6);
  VekuaParams p = params_for(g, 0.4, Complex(1.5, 0.2), TrigPoly(0.1, {{1, 0.2, 0.0}}),
                             TrigPoly(1.0, {{1, 0.3, 0.1}}));
  p.drift = {TrigPoly(0.35, {{1, 0.6, 0.2}}), TrigPoly(0.6, {{2, -0.3, 0.5}})};
  const PairedField u = manufactured(rng, g, {2, 2}, 3, 256);
  const PairedField f = apply_P(p, u);
  const SolveReport r = solve_field(p, f);
  CHECK(max_abs_difference(r.solution, u) < 1e-8);

  // Psi^{-1} o solve_0 o Psi.
  VekuaParams normal = p;
  normal.drift.clear();
  const PairedField fpsi = psi_conjugation(g, f, p.drift, PsiDirection::Forward);
  const SolveReport r0 = solve_field(normal, fpsi);
  const PairedField back = psi_conjugation(g, r0.solution, p.drift, PsiDirection::Inverse);
  CHECK(max_abs_difference(back, r.solution) < 1e-8);
}

TEST_CASE("solve_field is real-linear and schedule independent") {
  std::mt19937_64 rng(9);
  const GroupModel g = su2(0.7, 0.45);
  const VekuaParams p = params_for(g, 1.5, Complex(0.5, 0.5), TrigPoly(0.2, {{2, 0.1, 0.0}}),
                                   TrigPoly(1.0, {{1, 0.5, 0.0}}));
  const PairedField f = manufactured(rng, g, {4}, 3, 64);
  const PairedField h = manufactured(rng, g, {4}, 3, 64);
  SolveOptions one, many;
  one.threads = 1;
  many.threads = 4;
  const SolveReport rf = solve_field(p, f, one);
  const SolveReport rh = solve_field(p, h, one);
  const SolveReport rc = solve_field(p, linear_combination(1.7, f, -0.6, h), one);
  CHECK(max_abs_difference(rc.solution, linear_combination(1.7, rf.solution, -0.6, rh.solution)) < 1e-9);

  const SolveReport rm = solve_field(p, f, many);
  CHECK(max_abs_difference(rm.solution, rf.solution) == 0.0);
  CHECK(rm.residual_max == rf.residual_max);
}

TEST_CASE("solve_field error paths") {
  std::mt19937_64 rng(10);
  const GroupModel g = su2();
  const PairedField f = manufactured(rng, g, {2}, 1, 32);
  // delta = sqrt 2, alpha = 1, q = 1, s = 0, p0 = 0: every mode resonates.
  const VekuaParams resonant = params_for(g, std::sqrt(2.0), 1.0, TrigPoly(0.0), TrigPoly(1.0));
  try {
    solve_field(resonant, f);
    FAIL("expected ResonantMode");
  } catch (const ResonantMode& e) {
    CHECK(e.mode().rfind("(2l=0,2m=0,2n=0)", 0) == 0);
    CHECK(e.abs_d1() < 1e-12);
  }
  const VekuaParams degenerate = params_for(g, 1.0, 1.0, TrigPoly(0.0), TrigPoly(1.0));
  CHECK_THROWS_AS(solve_field(degenerate, f), HypothesisViolation);

  SolveOptions tight;
  tight.max_subpanels = 1;
  const VekuaParams fast = params_for(su2(30.0, 0.0), 0.2, 1.0, TrigPoly(0.0), TrigPoly(1.0));
  CHECK_THROWS_AS(solve_field(fast, manufactured(rng, su2(30.0, 0.0), {4}, 1, 16), tight), QuadratureFailure);
}

TEST_CASE("decay diagnostic calibration") {
  const GroupModel g = su2();
  CoefficientField power;
  power.truncation = {24};
  power.nt = 32;
  CoefficientField expo = power;
  for (const auto& mode : enumerate_modes(g, {24})) {
    const double w = mode_scalars(g, mode).weight;
    const double l = 0.5 * std::get<Su2Mode>(mode.entries[0]).two_l;
    ComplexSeries prof(1);
    prof.coeff_ref(0) = 1.0;
    prof.coeff_ref(1) = 0.5;
    power.modes.emplace(mode, std::pow(w, -2.0) * prof);
    expo.modes.emplace(mode, std::exp(-l) * prof);
  }
  const auto dp = decay_diagnostic(g, power, {0, 1, 2});
  for (const auto& fit : dp.fits) {
    REQUIRE(fit.slope.has_value());
    CHECK(*fit.slope == doctest::Approx(-2.0).epsilon(0.05));
  }
  CHECK_FALSE(dp.smooth_compatible);

  const auto de = decay_diagnostic(g, expo, {0, 1, 2, 3, 4});
  CHECK(de.smooth_compatible);
  for (const auto& fit : de.fits) CHECK(*fit.slope < -8.0);

  CoefficientField single;
  single.truncation = {0};
  single.nt = 8;
  single.modes.emplace(ModeIndex{{Su2Mode{0, 0, 0}}}, ComplexSeries::constant(1.0));
  const auto ds = decay_diagnostic(g, single, {0});
  CHECK(ds.table.size() == 1);
  CHECK_FALSE(ds.fits[0].slope.has_value());
  CHECK_FALSE(ds.note.empty());

  std::ostringstream csv;
  write_decay_csv(csv, ds);
  CHECK(csv.str().rfind("weight,beta,supnorm\n", 0) == 0);
}
