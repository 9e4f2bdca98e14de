#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "vekua/errors.hpp"
#include "vekua/mode_system.hpp"
#include "vekua/solve.hpp"

namespace vekua {

/// Schema violation; the message starts with the JSON path of the offending field.
class ConfigError : public InvalidParameters {
 public:
  using InvalidParameters::InvalidParameters;
};

enum class Task { Solve, Classify, Resonances, Diophantine, Oracle, Selftest };

std::string to_string(Task task);
std::optional<Task> task_from_string(const std::string& name);

struct ForcingSpec {
  std::optional<std::string> path;
  std::optional<nlohmann::json> inline_field;
};

struct RunConfig {
  Task task = Task::Solve;
  VekuaParams params;
  Truncation truncation;
  int nt = 256;
  long k_bound = 50;
  std::optional<ForcingSpec> forcing;
  double diophantine_M = 2.0;
  SolveOptions solver;
  std::string output_prefix = "vekua_";
  bool decay_csv = false;
  double selftest_scale = 0.25;
  /// The document as given plus the CLI overrides; hashed into reports.
  nlohmann::json effective;
};

/// Scalar overrides applied on top of the file.
struct Overrides {
  std::optional<double> delta;
  std::optional<double> alpha_re;
  std::optional<double> alpha_im;
  std::optional<int> trunc_L;  // sets every factor bound
  std::optional<int> nt;
  std::optional<Task> task;
};

RunConfig parse_config(const std::string& text, const Overrides& overrides = {});
RunConfig parse_config(nlohmann::json doc, const Overrides& overrides = {});

/// Number, or {"mean": m, "harmonics": [{"k": 1, "cos": a, "sin": b}, ...]}.
TrigPoly parse_trig(const nlohmann::json& j, const std::string& path);
nlohmann::json trig_to_json(const TrigPoly& p);

std::string sha256_hex(const std::string& data);

}  // namespace vekua
