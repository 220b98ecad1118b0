#pragma once

#include <optional>
#include <string>
#include <vector>

#include "iostd/core.hpp"

namespace iostd {

enum class Severity { Error, Warning, Info };

std::string_view to_string(Severity s);

/// One analysis result. `env` holds a structured witness assignment when the
/// finding has one, so that it can be re-checked by evaluating predicates.
struct Finding {
  Severity severity = Severity::Error;
  std::string code;
  std::string subject;
  std::string message;
  std::string witness;
  std::optional<VarAssignment> env;
  /// Multi-line evidence such as a witness trace; indented below the line.
  std::string attachment;
};

enum class ReportFormat { Lines, JsonLines };

/// `LEVEL code subject message[ | witness W]`
std::string render_line(const Finding& f);
/// One JSON object with fields severity, code, subject, witness (and message).
std::string render_json(const Finding& f);
std::string render(const std::vector<Finding>& findings, ReportFormat fmt);

bool has_errors(const std::vector<Finding>& findings);

}  // namespace iostd
