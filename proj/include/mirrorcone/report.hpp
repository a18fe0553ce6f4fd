#pragma once

#include <json.hpp>

#include <set>
#include <string>
#include <vector>

#include "mirrorcone/config.hpp"

namespace mirrorcone {

enum ExitCode : int { kExitOk = 0, kExitDomain = 1, kExitInput = 2, kExitCertificate = 3 };

/// A failure inside one pipeline stage, tagged with the module it came from.
class ModuleError : public std::runtime_error {
 public:
  ModuleError(std::string module, int code, const std::string& msg)
      : std::runtime_error(module + ": " + msg), module(std::move(module)), code(code) {}
  std::string module;
  int code;
};

const std::vector<std::string>& section_names();

struct ValidateResult {
  int code = kExitOk;
  std::string message;
};
/// Lattice axioms plus the exponent keys of lambda and b_valuations.
ValidateResult validate_config(const Config& cfg);

struct AnalyzeResult {
  nlohmann::json report;
  int code = kExitOk;
  std::vector<std::string> diagnostics;  // failed internal checks, "module: what"
};
/// Empty `sections` means all of them. Throws ModuleError.
AnalyzeResult analyze(const Config& cfg, const std::set<std::string>& sections = {});

/// Rendered report: two-space indented JSON with a trailing newline.
std::string render(const nlohmann::json& report);

}  // namespace mirrorcone
