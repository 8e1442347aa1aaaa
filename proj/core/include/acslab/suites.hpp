#pragma once

// Named acceptance bundles. Each criterion prints one pass/fail line.

#include <ostream>
#include <string>
#include <vector>

namespace acslab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Criterion names in order; "all" runs every one of them.
const std::vector<std::string>& suite_names();

/// Runs one named criterion or "all", streaming a line per criterion to log.
/// Throws ConfigError for an unknown name.
std::vector<CriterionResult> run_suite(const std::string& name, std::ostream* log = nullptr);

std::string format_result(const CriterionResult& r);

}  // namespace acslab
