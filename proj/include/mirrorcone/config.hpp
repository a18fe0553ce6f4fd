#pragma once

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>

#include "mirrorcone/toricdata.hpp"

namespace mirrorcone {

/// Bad JSON or a schema violation; `where` is a line number or a field path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string where, const std::string& msg)
      : std::runtime_error(where.empty() ? msg : where + ": " + msg), where(std::move(where)) {}
  std::string where;
};

struct AnalysisFlags {
  bool algebra = false;
  std::optional<std::size_t> cutoff;
  std::optional<unsigned long> perturb;
};

struct Config {
  ToricInput input;
  AnalysisFlags flags;
};

/// Indices in the file are 1-based; ToricInput uses 0-based ones.
Config parse_config(const std::string& text);
nlohmann::json config_to_json(const Config& cfg);

std::string rat_string(const Rat& x);
Rat parse_rat(const std::string& s);

}  // namespace mirrorcone
