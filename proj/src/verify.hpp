#pragma once

#include <string>
#include <vector>

namespace opp::harness {

struct VerifyResult {
  std::string suite;
  bool passed = false;
  std::string detail;        // empty when passed, first failing check otherwise
  std::string witness_path;  // "-" when passed
};

std::vector<std::string> verify_suite_names();

// Runs one suite by name, or every suite for "all". Fixed seeds throughout;
// failing suites write their witness instance under witness_dir.
std::vector<VerifyResult> run_verify(const std::string& name, const std::string& witness_dir);

// Line-oriented report: SUITE <name> PASS|FAIL witness=<path>
std::string verify_report(const std::vector<VerifyResult>& results);

}  // namespace opp::harness
