#pragma once

#include <string>
#include <vector>

namespace vekua {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// The acceptance suite. scale in (0, 1] shrinks sample counts (1 = full size).
std::vector<CriterionResult> run_acceptance(double scale = 1.0, unsigned threads = 0);

CriterionResult acceptance_criterion(int id, double scale = 1.0, unsigned threads = 0);

/// "[PASS] criterion N (title): detail (t s)".
std::string format_result(const CriterionResult& r);

}  // namespace vekua
