// Acceptance gate: one verification suite per criterion, exercised through
// the public C API exactly as an embedding application would.
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "opp/opp.h"

namespace {

const std::vector<std::string> kCriteria = {
    "mts-golden-fractions",
    "mts-follow-bound",
    "mts-pricing-fidelity",
    "mts-work-monotone",
    "matching-oracle",
    "kserver-lazy-potential",
    "kserver-pricing-fidelity",
    "parking-harmonic-frequency",
    "parking-exponential-gap",
    "parking-transform",
    "parking-monotone-pricing",
    "parking-min-sum-prices",
    "report-determinism",
};

const std::vector<std::string> kProperties = {
    "metric-properties", "mts-properties",    "kserver-properties",
    "parking-properties", "agents-properties", "harness-properties",
};

int run_suites(const std::vector<std::string>& suites, const char* label) {
  int failures = 0;
  for (size_t i = 0; i < suites.size(); ++i) {
    char* report = nullptr;
    int all_passed = 0;
    opp_status st = opp_verify(suites[i].c_str(), "acceptance-witness", &report, &all_passed);
    bool ok = st == OPP_OK && all_passed == 1;
    if (!ok) ++failures;
    std::printf("%s %2zu: %s  %s\n", label, i + 1, ok ? "PASS" : "FAIL", suites[i].c_str());
    if (!ok && report) {
      std::printf("%s", report);
    } else if (!ok) {
      std::printf("  error: %s\n", opp_last_error());
    }
    opp_string_free(report);
    std::fflush(stdout);
  }
  return failures;
}

}  // namespace

int main(int argc, char** argv) {
  bool properties = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--properties") == 0) {
      properties = true;
    } else {
      std::fprintf(stderr, "usage: %s [--properties]\n", argv[0]);
      return 2;
    }
  }
  int failures = properties ? run_suites(kProperties, "property")
                            : run_suites(kCriteria, "criterion");
  if (failures) {
    std::printf("%d of %zu suites failed\n", failures,
                (properties ? kProperties : kCriteria).size());
    return 1;
  }
  std::printf("all %zu suites passed\n", (properties ? kProperties : kCriteria).size());
  return 0;
}
