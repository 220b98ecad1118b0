#include "iostd/finding.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>

namespace iostd {

std::string_view to_string(Severity s) {
  switch (s) {
    case Severity::Error: return "error";
    case Severity::Warning: return "warning";
    case Severity::Info: return "info";
  }
  return "?";
}

std::string render_line(const Finding& f) {
  std::string r = std::string(to_string(f.severity)) + " " + f.code + " " + f.subject + " " + f.message;
  if (!f.witness.empty()) r += " | witness " + f.witness;
  std::size_t b = 0;
  while (b < f.attachment.size()) {
    auto e = f.attachment.find('\n', b);
    if (e == std::string::npos) e = f.attachment.size();
    r += "\n    " + f.attachment.substr(b, e - b);
    b = e + 1;
  }
  return r;
}

std::string render_json(const Finding& f) {
  nlohmann::ordered_json j;
  j["severity"] = to_string(f.severity);
  j["code"] = f.code;
  j["subject"] = f.subject;
  j["message"] = f.message;
  j["witness"] = f.witness;
  if (!f.attachment.empty()) j["trace"] = f.attachment;
  return j.dump();
}

std::string render(const std::vector<Finding>& findings, ReportFormat fmt) {
  std::string r;
  for (const auto& f : findings) {
    r += fmt == ReportFormat::Lines ? render_line(f) : render_json(f);
    r += "\n";
  }
  return r;
}

bool has_errors(const std::vector<Finding>& findings) {
  return std::any_of(findings.begin(), findings.end(),
                     [](const Finding& f) { return f.severity == Severity::Error; });
}

}  // namespace iostd
