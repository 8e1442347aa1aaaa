#pragma once

// JSON-configured experiments. The schema is documented in docs/config.md;
// unknown keys and unparsable or non-finite expressions are ConfigErrors.

#include <optional>
#include <ostream>
#include <string>

#include "acslab/grid.hpp"

namespace acslab {

struct ExperimentConfig {
  std::string kind;
  unsigned seed = 0;
  GridChart grid;
  std::string out_dir = "results";
  std::string name;
  /// Validated configuration as canonical JSON text.
  std::string source;
};

struct RunOverrides {
  std::optional<unsigned> seed;
  std::optional<int> resolution;
  std::optional<std::string> out_dir;
};

/// Throws ConfigError naming the offending key.
ExperimentConfig parse_config(const std::string& text, const RunOverrides& overrides = {});
/// Throws IoError, ConfigError.
ExperimentConfig load_config(const std::string& path, const RunOverrides& overrides = {});

struct RunResult {
  int exit_code = 0;
  std::string json_path;
  std::string csv_path;
  /// The JSON record that was written.
  std::string record;
};

/// Writes <out_dir>/<name>.json and, for scans and sweeps, <name>.csv. A
/// failing computation writes an error record and returns a nonzero code.
RunResult run(const ExperimentConfig& config);

/// Prints one line per criterion; returns 0 only if all pass. Throws ConfigError.
int reproduce(const std::string& suite, std::ostream& out);

/// Header and per-component ranges of a field file. Throws IoError.
void dump_field(const std::string& path, std::ostream& out);

}  // namespace acslab
