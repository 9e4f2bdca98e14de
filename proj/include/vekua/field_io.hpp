#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "vekua/errors.hpp"
#include "vekua/field.hpp"

namespace vekua {

/// Unreadable or unwritable file.
class FileError : public Error {
 public:
  using Error::Error;
};

/// A field as read from disk: the conjugate half is optional.
struct FieldDocument {
  CoefficientField primal;
  std::optional<CoefficientField> conj;
};

/// Parses a "vekua-field/1" document. Missing "nt" / "truncation" fall back to the defaults.
/// Errors are ConfigError with a JSON path.
FieldDocument field_from_json(const nlohmann::json& doc, const GroupModel& model,
                              const Truncation& default_truncation, int default_nt,
                              const std::string& path = "$");

/// Samples are written as [[re, im], ...]; series as {"re": [...], "im": [...]} for j = -d..d.
nlohmann::json field_to_json(const GroupModel& model, const CoefficientField& primal,
                             const CoefficientField* conj);

FieldDocument read_field(const std::string& file, const GroupModel& model,
                         const Truncation& default_truncation, int default_nt);
void write_text(const std::string& file, const std::string& text);
std::string read_text(const std::string& file);

nlohmann::json mode_to_json(const ModeIndex& mode);

}  // namespace vekua
