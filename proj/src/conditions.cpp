#include "vekua/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "vekua/errors.hpp"

namespace vekua {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double abs2_A0(const GlobalConstants& c) { return c.s0 * c.s0 + c.delta * c.delta * c.q0 * c.q0; }
double abs2_B0(const GlobalConstants& c) { return std::norm(c.alpha) * c.q0 * c.q0; }

bool all_zero(const Eigen::VectorXd& v) { return (v.array() == 0.0).all(); }

double omega_of(const GlobalConstants& c) {
  return std::sqrt(c.delta * c.delta - std::norm(c.alpha));
}

double dist_to_integer(double x) { return std::abs(x - std::nearbyint(x)); }

}  // namespace

GlobalConstants global_constants(const VekuaParams& params) {
  validate(params);
  const OperatorConstants k = operator_constants(params);
  GlobalConstants c;
  c.s0 = k.s0;
  c.q0 = k.q0;
  c.delta = k.delta;
  c.alpha = k.alpha;
  c.A0 = {k.s0, k.delta * k.q0};
  c.B0 = k.alpha * k.q0;
  c.lambda = Eigen::Map<const Eigen::VectorXd>(params.group.lambda.data(),
                                               static_cast<Eigen::Index>(params.group.lambda.size()));
  c.p0 = Eigen::Map<const Eigen::VectorXd>(params.group.p0.data(),
                                           static_cast<Eigen::Index>(params.group.p0.size()));
  return c;
}

ResonanceResiduals resonance_residuals(const GlobalConstants& c, const ModeScalars& s, long k) {
  const double kb = static_cast<double>(k) + s.b;
  const double x = kTwoPi * kb;
  const double aq = s.a * c.q0;
  const double rhs = abs2_A0(c) - abs2_B0(c);
  ResonanceResiduals r;
  r.r1 = c.s0 * x + c.delta * s.a * c.q0 * c.q0;
  r.r2 = x * x + aq * aq - rhs;
  const double scale1 = std::abs(c.s0 * x) + std::abs(c.delta * s.a) * c.q0 * c.q0;
  const double scale2 = x * x + aq * aq + abs2_A0(c) + abs2_B0(c);
  r.hit = std::abs(r.r1) <= kResonanceTolerance * (1.0 + scale1) &&
          std::abs(r.r2) <= kResonanceTolerance * (1.0 + scale2);
  return r;
}

std::vector<ResonanceHit> find_resonances_analytic(const GlobalConstants& c,
                                                   const std::vector<ModeScalars>& spectrum) {
  std::vector<ResonanceHit> hits;
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    const ModeScalars& s = spectrum[i];
    const double aq = s.a * c.q0;
    const double r = abs2_A0(c) - abs2_B0(c) - aq * aq;
    const double scale = aq * aq + abs2_A0(c) + abs2_B0(c);
    if (r < -kResonanceTolerance * (1.0 + scale)) continue;
    const double root = std::sqrt(std::max(r, 0.0)) / kTwoPi;
    std::set<long> tried;
    for (double x : {-s.b - root, -s.b + root}) {
      if (!std::isfinite(x) || std::abs(x) > 1e15) continue;
      for (double cand : {std::floor(x), std::ceil(x)}) {
        const long k = static_cast<long>(cand);
        if (!tried.insert(k).second) continue;
        const ResonanceResiduals res = resonance_residuals(c, s, k);
        if (!res.hit) continue;
        const double d = std::min(std::abs(-s.b - root - cand), std::abs(-s.b + root - cand));
        hits.push_back({i, s.a, s.b, k, res.r1, res.r2, d});
      }
    }
  }
  std::sort(hits.begin(), hits.end(), [](const auto& l, const auto& r) { return l.key() < r.key(); });
  return hits;
}

std::vector<ResonanceHit> find_resonances_bruteforce(const GlobalConstants& c,
                                                     const std::vector<ModeScalars>& spectrum,
                                                     long k_bound) {
  std::vector<ResonanceHit> hits;
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    for (long k = -k_bound; k <= k_bound; ++k) {
      const ResonanceResiduals res = resonance_residuals(c, spectrum[i], k);
      if (res.hit) hits.push_back({i, spectrum[i].a, spectrum[i].b, k, res.r1, res.r2, 0.0});
    }
  }
  return hits;
}

ResonanceSearch find_resonances(const GlobalConstants& c, const std::vector<ModeScalars>& spectrum,
                                long k_bound) {
  ResonanceSearch out;
  out.k_bound = k_bound;
  out.hits = find_resonances_analytic(c, spectrum);
  const auto brute = find_resonances_bruteforce(c, spectrum, k_bound);
  out.bruteforce_count = brute.size();
  std::set<std::pair<std::size_t, long>> analytic_keys, brute_keys;
  for (const auto& h : out.hits)
    if (std::abs(h.k) <= k_bound) analytic_keys.insert(h.key());
  for (const auto& h : brute) brute_keys.insert(h.key());
  out.paths_agree = analytic_keys == brute_keys;
  return out;
}

namespace {

// Smallest denominator Q <= max_den with x Q within 1e-12 of an integer.
std::optional<long> small_denominator(double x, long max_den) {
  for (long q = 1; q <= max_den; ++q) {
    const double xq = x * static_cast<double>(q);
    if (std::abs(xq - std::nearbyint(xq)) <= 1e-12 * std::max(1.0, std::abs(xq))) return q;
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::vector<double>> b_residues(const GroupModel& model) {
  constexpr long kMaxDen = 1000;
  constexpr long kMaxModulus = 1000000;
  std::vector<double> gens;
  for (std::size_t j = 0; j < model.size(); ++j)
    gens.push_back(model.factors[j].kind == FactorKind::Circle ? model.p0[j] : 0.5 * model.p0[j]);
  long n = 1;
  for (double g : gens) {
    const auto q = small_denominator(g, kMaxDen);
    if (!q) return std::nullopt;
    n = std::lcm(n, *q);
    if (n > kMaxModulus) return std::nullopt;
  }
  long step = n;
  for (double g : gens) {
    const long num = static_cast<long>(std::llround(g * static_cast<double>(n))) % n;
    step = std::gcd(step, std::abs(num));
  }
  std::vector<double> out;
  for (long i = 0; i < n; i += step) out.push_back(static_cast<double>(i) / static_cast<double>(n));
  return out;
}

std::string to_string(DiophantineKind kind) {
  switch (kind) {
    case DiophantineKind::DC: return "DC";
    case DiophantineKind::DCPrime: return "DC'";
    case DiophantineKind::III: return "III";
  }
  return "?";
}

namespace {

double dc_phase(const GlobalConstants& c, double b) { return kTwoPi * b - c.q0 * omega_of(c); }

double quantity(DiophantineKind kind, const GlobalConstants& c, const OperatorConstants& k,
                const ModeScalars& s) {
  switch (kind) {
    case DiophantineKind::DC: return kTwoPi * dist_to_integer(dc_phase(c, s.b) / kTwoPi);
    case DiophantineKind::DCPrime: return std::abs(std::polar(1.0, dc_phase(c, s.b)) - 1.0);
    case DiophantineKind::III: {
      const Denominators d = boundary_denominators(k, s);
      return std::min(std::abs(d.D1), std::abs(d.D2));
    }
  }
  return 0.0;
}

// Smallest weight of any mode left out by the truncation.
double first_weight_outside(const GroupModel& model, const Truncation& truncation) {
  double nu = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < model.size(); ++j) {
    const double next = truncation[j] + 1;
    nu = std::min(nu, model.factors[j].kind == FactorKind::Circle ? next * next
                                                                   : next * (next + 2.0) / 4.0);
  }
  return std::sqrt(1.0 + nu);
}

double snapped(double v) { return v < kDiophantineZero ? 0.0 : v; }

}  // namespace

DiophantineReport diophantine_check(const VekuaParams& params, const Truncation& truncation,
                                    DiophantineKind kind, double M) {
  const GlobalConstants c = global_constants(params);
  const OperatorConstants k = operator_constants(params);
  if (kind != DiophantineKind::III &&
      !(std::abs(c.alpha) < std::abs(c.delta) && std::abs(c.s0) <= kZeroS0))
    throw InvalidParameters(to_string(kind) + " requires |alpha| < |delta| and s0 = 0");
  if (!(M >= 0.0) || !std::isfinite(M)) throw InvalidParameters("exponent M must be finite and >= 0");

  DiophantineReport rep;
  rep.kind = kind;
  rep.truncation = truncation;
  rep.M = M;

  const auto modes = enumerate_spectrum(params.group, truncation);
  const auto scalars = mode_scalars(params.group, modes);
  std::vector<double> values(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) values[i] = snapped(quantity(kind, c, k, scalars[i]));

  std::vector<std::size_t> order(modes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return scalars[l].weight < scalars[r].weight; });
  for (std::size_t i : order) {
    if (rep.rows.empty() || rep.rows.back().weight != scalars[i].weight)
      rep.rows.push_back({scalars[i].weight, values[i], i});
    else if (values[i] < rep.rows.back().min_value)
      rep.rows.back().min_value = values[i], rep.rows.back().argmin = i;
  }

  double worst_ratio = std::numeric_limits<double>::infinity();
  for (const auto& row : rep.rows) {
    if (row.weight < M) continue;
    const double bound = std::pow(row.weight, -M);
    if (row.min_value >= bound) continue;
    rep.holds = false;
    const double ratio = row.min_value / bound;
    if (ratio < worst_ratio) {
      worst_ratio = ratio;
      rep.witness = DiophantineWitness{modes[row.argmin], row.weight, row.min_value, bound};
    }
  }

  std::vector<double> xs, ys;
  for (const auto& row : rep.rows)
    if (row.weight >= M && row.min_value > 0.0) {
      xs.push_back(std::log(row.weight));
      ys.push_back(std::log(row.min_value));
    }
  if (xs.size() >= 2) {
    const double n = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx > 0.0) {
      const double slope = sxy / sxx;
      rep.M_hat = -slope;
      double ss = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (my + slope * (xs[i] - mx));
        ss += e * e;
      }
      rep.fit_residual = std::sqrt(ss / n);
    }
  }

  // The quantity depends on the mode only through b mod 1 when lambda = 0 (and always for DC, DC').
  const bool periodic_in_b = kind != DiophantineKind::III || all_zero(c.lambda);
  const auto residues = periodic_in_b ? b_residues(params.group) : std::nullopt;
  if (residues) {
    double inf = std::numeric_limits<double>::infinity();
    ModeScalars probe;
    probe.mu = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(params.group.size()));
    for (double r : *residues) {
      probe.b = r;
      inf = std::min(inf, snapped(quantity(kind, c, k, probe)));
    }
    rep.residue_min = inf;
  }
  if (!rep.holds) {
    rep.certified = true;
    rep.note = "violated at a mode inside the truncation";
  } else if (rep.residue_min) {
    const double beyond = std::max(first_weight_outside(params.group, truncation), M);
    rep.certified = *rep.residue_min >= std::pow(beyond, -M);
    rep.note = rep.certified ? "holds on the whole dual (finite residue-class reduction)"
                             : "holds up to the truncation; residue-class bound inconclusive beyond it";
  } else {
    rep.note = "holds up to the truncation only";
  }
  return rep;
}

DcEquivalenceReport dc_prime_equivalence(const VekuaParams& params, const Truncation& truncation,
                                         double M) {
  DcEquivalenceReport rep;
  rep.dc = diophantine_check(params, truncation, DiophantineKind::DC, M);
  rep.dc_prime = diophantine_check(params, truncation, DiophantineKind::DCPrime, M);

  const GlobalConstants c = global_constants(params);
  for (const auto& mode : enumerate_spectrum(params.group, truncation)) {
    const double theta = dc_phase(c, mode_scalars(params.group, mode).b);
    const double e = std::abs(std::polar(1.0, theta) - 1.0);
    const double d = kTwoPi * dist_to_integer(theta / kTwoPi);
    rep.identity_residual = std::max(rep.identity_residual, std::abs(e * e - 2.0 * (1.0 - std::cos(theta))));
    rep.bound_violation = std::max({rep.bound_violation, 2.0 / M_PI * d - e, e - d});
  }
  // Rounding in e and d is O(1e-16 |theta|); only report real violations.
  if (rep.bound_violation < 1e-12) rep.bound_violation = 0.0;

  // Smallest M' >= max(M, 1) with (M' - M) log M' >= log(pi / 2), by bisection.
  const auto f = [&](double x) { return (x - M) * std::log(x) - std::log(M_PI / 2.0); };
  double lo = std::max(M, 1.0), hi = lo + 10.0;
  if (f(lo) >= 0.0) {
    hi = lo;
  } else {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (f(mid) >= 0.0 ? hi : lo) = mid;
    }
  }
  rep.M_shifted = hi;
  rep.dc_prime_at_shifted =
      diophantine_check(params, truncation, DiophantineKind::DCPrime, rep.M_shifted).holds;
  rep.dc_prime_implies_dc = !rep.dc_prime.holds || rep.dc.holds;
  rep.dc_implies_dc_prime_shifted = !rep.dc.holds || rep.dc_prime_at_shifted;

  rep.ladder = {0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
  for (double m : rep.ladder) {
    rep.dc_exists_on_ladder =
        rep.dc_exists_on_ladder || diophantine_check(params, truncation, DiophantineKind::DC, m).holds;
    rep.dc_prime_exists_on_ladder =
        rep.dc_prime_exists_on_ladder ||
        diophantine_check(params, truncation, DiophantineKind::DCPrime, m).holds;
  }
  rep.agree = rep.dc_prime_implies_dc && rep.dc_implies_dc_prime_shifted &&
              rep.dc_exists_on_ladder == rep.dc_prime_exists_on_ladder && rep.bound_violation == 0.0;
  return rep;
}

Lambda0Classification classify_lambda0(const VekuaParams& params, const Truncation& truncation,
                                       long k_bound, double M) {
  Lambda0Classification out;
  out.constants = global_constants(params);
  const GlobalConstants& c = out.constants;
  if (!all_zero(c.lambda)) throw InvalidParameters("the lambda = 0 classifier needs every lambda_j = 0");
  if (violates_hypothesis_one(params))
    throw HypothesisViolation("|alpha| = |delta|: hypothesis (I) fails and rho = 0");

  if (std::abs(c.B0) > std::abs(c.A0)) {
    out.case_number = 1;
    out.solvable = true;
    out.certified = true;
    out.verdict = "case 1: solvable";
    return out;
  }

  const auto modes = enumerate_spectrum(params.group, truncation);
  const auto scalars = mode_scalars(params.group, modes);
  const auto residues = b_residues(params.group);
  // With lambda = 0 the resonance system depends on b mod 1 only.
  auto residue_hits = [&]() -> std::optional<std::size_t> {
    if (!residues) return std::nullopt;
    std::vector<ModeScalars> probes;
    for (double r : *residues) {
      ModeScalars p;
      p.b = r;
      p.mu = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(params.group.size()));
      probes.push_back(p);
    }
    return find_resonances_analytic(c, probes).size();
  };

  if (std::abs(c.alpha) > std::abs(c.delta)) {
    out.case_number = 2;
    out.resonances = find_resonances(c, scalars, k_bound);
    out.solvable = out.resonances->hits.empty();
    if (const auto rh = residue_hits()) {
      out.certified = true;
      out.solvable = *rh == 0;
    }
  } else if (std::abs(c.s0) > kZeroS0) {
    out.case_number = 3;
    out.solvable = true;
    out.certified = true;
  } else {
    out.case_number = 4;
    out.resonances = find_resonances(c, scalars, k_bound);
    out.diophantine = diophantine_check(params, truncation, DiophantineKind::DC, M);
    out.solvable = out.resonances->hits.empty() && out.diophantine->holds;
    if (const auto rh = residue_hits(); rh && out.diophantine->residue_min) {
      // Some M works iff the residue-class infimum is positive.
      out.certified = true;
      out.solvable = *rh == 0 && *out.diophantine->residue_min > kResonanceTolerance;
    }
  }
  out.verdict = "case " + std::to_string(out.case_number) + ": " +
                (out.solvable ? "solvable" : "not solvable") +
                (out.certified ? "" : " (up to the truncation)");
  return out;
}

}  // namespace vekua
