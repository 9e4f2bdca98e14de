#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "vekua/field.hpp"

namespace vekua {

struct DecayRow {
  double weight = 0.0;
  int beta = 0;
  double supnorm = 0.0;  // max over modes of sup_t |d^beta/dt^beta profile|
};

struct DecayFit {
  int beta = 0;
  /// Least-squares slope of log(supnorm) against log(weight) over the upper half of the
  /// weight bins; -inf when the tail is identically zero, unset when undefined.
  std::optional<double> slope;
  double residual = 0.0;
  std::size_t bins_used = 0;
  bool smooth_compatible = false;  // slope < -max_poly_order
};

struct DecayDiagnostic {
  std::vector<DecayRow> table;  // ascending weight, then beta
  std::vector<DecayFit> fits;
  int max_poly_order = 8;
  bool smooth_compatible = false;
  std::string note;
};

DecayDiagnostic decay_diagnostic(const GroupModel& model, const CoefficientField& field,
                                 const std::vector<int>& orders, int max_poly_order = 8);

/// CSV with header weight,beta,supnorm.
void write_decay_csv(std::ostream& os, const DecayDiagnostic& d);

}  // namespace vekua
