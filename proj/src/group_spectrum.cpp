#include "vekua/group_spectrum.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "vekua/errors.hpp"
#include "vekua/su2.hpp"

namespace vekua {

void validate(const GroupModel& model) {
  if (model.factors.empty()) throw InvalidParameters("group model needs at least one factor");
  if (model.lambda.size() != model.factors.size() || model.p0.size() != model.factors.size())
    throw InvalidParameters("lambda and p0 must have one entry per factor");
  for (std::size_t j = 0; j < model.size(); ++j) {
    if (!std::isfinite(model.lambda[j]) || !std::isfinite(model.p0[j]))
      throw InvalidParameters("lambda and p0 must be finite");
  }
}

std::string to_string(const ModeIndex& mode) {
  std::ostringstream out;
  out << '(';
  for (std::size_t j = 0; j < mode.entries.size(); ++j) {
    if (j) out << "; ";
    if (const auto* c = std::get_if<CircleMode>(&mode.entries[j])) {
      out << "k=" << c->k;
    } else {
      const auto& s = std::get<Su2Mode>(mode.entries[j]);
      out << "2l=" << s.two_l << ",2m=" << s.two_m << ",2n=" << s.two_n;
    }
  }
  out << ')';
  return out.str();
}

namespace {

bool same_parity(int x, int y) { return ((x - y) % 2) == 0; }

bool admissible_su2(const Su2Mode& s) {
  return s.two_l >= 0 && std::abs(s.two_m) <= s.two_l && std::abs(s.two_n) <= s.two_l &&
         same_parity(s.two_m, s.two_l) && same_parity(s.two_n, s.two_l);
}

// mu of one factor entry, exact in halves.
double factor_mu(const FactorMode& entry) {
  if (const auto* c = std::get_if<CircleMode>(&entry)) return static_cast<double>(c->k);
  return 0.5 * std::get<Su2Mode>(entry).two_m;
}

double factor_nu(const FactorMode& entry) {
  if (const auto* c = std::get_if<CircleMode>(&entry)) return static_cast<double>(c->k) * c->k;
  const int two_l = std::get<Su2Mode>(entry).two_l;
  return 0.25 * static_cast<double>(two_l) * (two_l + 2);
}

std::vector<FactorMode> factor_modes(FactorKind kind, int bound, bool pin_column) {
  std::vector<FactorMode> out;
  if (kind == FactorKind::Circle) {
    for (int k = -bound; k <= bound; ++k) out.emplace_back(CircleMode{k});
    return out;
  }
  for (int two_l = 0; two_l <= bound; ++two_l) {
    for (int two_m = -two_l; two_m <= two_l; two_m += 2) {
      if (pin_column) {
        out.emplace_back(Su2Mode{two_l, two_m, two_m});
        continue;
      }
      for (int two_n = -two_l; two_n <= two_l; two_n += 2)
        out.emplace_back(Su2Mode{two_l, two_m, two_n});
    }
  }
  return out;
}

std::vector<ModeIndex> product_modes(const GroupModel& model, const Truncation& truncation,
                                     bool pin_column) {
  validate(model);
  if (truncation.size() != model.size())
    throw InvalidParameters("truncation needs one bound per factor");
  std::vector<std::vector<FactorMode>> per_factor;
  for (std::size_t j = 0; j < model.size(); ++j) {
    if (truncation[j] < 0) throw InvalidParameters("truncation bounds must be >= 0");
    per_factor.push_back(factor_modes(model.factors[j].kind, truncation[j], pin_column));
  }
  // Odometer over factors, last factor fastest: ascending lexicographic order.
  std::vector<ModeIndex> out;
  std::vector<std::size_t> digit(model.size(), 0);
  while (true) {
    ModeIndex mode;
    for (std::size_t j = 0; j < model.size(); ++j) mode.entries.push_back(per_factor[j][digit[j]]);
    out.push_back(std::move(mode));
    std::size_t j = model.size();
    while (j > 0) {
      --j;
      if (++digit[j] < per_factor[j].size()) break;
      digit[j] = 0;
      if (j == 0) return out;
    }
  }
}

}  // namespace

bool is_admissible(const GroupModel& model, const ModeIndex& mode) {
  if (mode.entries.size() != model.size()) return false;
  for (std::size_t j = 0; j < model.size(); ++j) {
    const bool circle = std::holds_alternative<CircleMode>(mode.entries[j]);
    if (circle != (model.factors[j].kind == FactorKind::Circle)) return false;
    if (!circle && !admissible_su2(std::get<Su2Mode>(mode.entries[j]))) return false;
  }
  return true;
}

bool within_truncation(const GroupModel& model, const Truncation& truncation,
                       const ModeIndex& mode) {
  if (!is_admissible(model, mode) || truncation.size() != model.size()) return false;
  for (std::size_t j = 0; j < model.size(); ++j) {
    if (const auto* c = std::get_if<CircleMode>(&mode.entries[j])) {
      if (std::abs(c->k) > truncation[j]) return false;
    } else if (std::get<Su2Mode>(mode.entries[j]).two_l > truncation[j]) {
      return false;
    }
  }
  return true;
}

std::vector<ModeIndex> enumerate_modes(const GroupModel& model, const Truncation& truncation) {
  return product_modes(model, truncation, false);
}

std::vector<ModeIndex> enumerate_spectrum(const GroupModel& model, const Truncation& truncation) {
  return product_modes(model, truncation, true);
}

ModeScalars mode_scalars(const GroupModel& model, const ModeIndex& mode) {
  if (!is_admissible(model, mode))
    throw InvalidParameters("inadmissible mode " + to_string(mode));
  ModeScalars out;
  out.mu.resize(static_cast<Eigen::Index>(model.size()));
  double nu = 0.0;
  for (std::size_t j = 0; j < model.size(); ++j) {
    const double mu = factor_mu(mode.entries[j]);
    out.mu[static_cast<Eigen::Index>(j)] = mu;
    out.a += model.lambda[j] * mu;
    out.b += model.p0[j] * mu;
    nu += factor_nu(mode.entries[j]);
  }
  out.weight = std::sqrt(1.0 + nu);
  return out;
}

std::vector<ModeScalars> mode_scalars(const GroupModel& model, const std::vector<ModeIndex>& modes) {
  std::vector<ModeScalars> out;
  out.reserve(modes.size());
  for (const auto& mode : modes) out.push_back(mode_scalars(model, mode));
  return out;
}

ConjugateMode conjugate_mode(const GroupModel& model, const ModeIndex& mode) {
  if (!is_admissible(model, mode))
    throw InvalidParameters("inadmissible mode " + to_string(mode));
  ConjugateMode out;
  double sign = 1.0;
  for (const auto& entry : mode.entries) {
    if (const auto* c = std::get_if<CircleMode>(&entry)) {
      out.mode.entries.emplace_back(CircleMode{-c->k});
    } else {
      const auto& s = std::get<Su2Mode>(entry);
      out.mode.entries.emplace_back(Su2Mode{s.two_l, -s.two_m, -s.two_n});
      sign *= su2::conjugation_sign(s.two_m, s.two_n);
    }
  }
  out.phase = {sign, 0.0};
  return out;
}

}  // namespace vekua
