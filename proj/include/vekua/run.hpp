#pragma once

#include <exception>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "vekua/config.hpp"

namespace vekua {

enum ExitCode : int {
  kExitOk = 0,
  kExitSelftestFailed = 1,
  kExitConfig = 2,
  kExitHypothesis = 3,
  kExitResonance = 4,
  kExitNumerical = 5,
  kExitTruncationAsymmetry = 6,
  kExitFile = 7,
};

/// Exit code for an exception escaping a task.
int exit_code_for(const std::exception& e);

/// The table printed by --help.
std::string exit_code_table();

struct RunOutcome {
  int exit_code = kExitOk;
  /// "generated_at" first; every other byte is a function of the configuration.
  nlohmann::ordered_json report;
  std::vector<std::string> files;  // written, in order
  std::string summary;             // one line for the terminal
};

/// Runs the configured task and writes its artifacts under cfg.output_prefix.
/// Relative forcing paths resolve against base_dir. Failures are reported in the
/// outcome (and its report file), not thrown.
RunOutcome run(const RunConfig& cfg, const std::string& base_dir = ".", std::ostream* progress = nullptr);

/// Report without the timestamp line, for comparisons.
std::string report_body(const nlohmann::ordered_json& report);

}  // namespace vekua
