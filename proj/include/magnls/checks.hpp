#pragma once

#include <string>
#include <vector>

namespace magnls {

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Self-checks behind `magnls check --suite <name>`; `all` runs every suite.
std::vector<CheckResult> run_checks(const std::string& suite, unsigned seed = 7);

std::vector<std::string> check_suites();

}  // namespace magnls
