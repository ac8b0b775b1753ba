#include "doctest.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "opp/opp.h"

namespace {

// takes ownership of a char** output and frees it on scope exit
struct Out {
  char* s = nullptr;
  ~Out() { opp_string_free(s); }
  std::string str() const { return s ? s : ""; }
};

struct ScenarioHandle {
  opp_scenario* p = nullptr;
  ~ScenarioHandle() { opp_scenario_free(p); }
};

struct ReportHandle {
  opp_report* p = nullptr;
  ~ReportHandle() { opp_report_free(p); }
};

const char* kParkingScenario =
    "family = parking\n"
    "algorithm = greedy\n"
    "pricing = none\n"
    "generator = adversarial\n"
    "seed = 3\n"
    "trials = 4\n"
    "\n[params]\n"
    "n = 6\n"
    "eps = 0.001\n";

}  // namespace

TEST_SUITE("capi") {

TEST_CASE("version and error slot") {
  CHECK(std::string(opp_version()) == "1.0.0");
  ScenarioHandle s;
  REQUIRE(opp_scenario_parse(kParkingScenario, &s.p) == OPP_OK);
  CHECK(std::string(opp_last_error()).empty());
}

TEST_CASE("status codes map the failure kinds") {
  opp_scenario* s = nullptr;
  CHECK(opp_scenario_parse("family parking\n", &s) == OPP_EPARSE);
  CHECK(std::string(opp_last_error()).find("line") != std::string::npos);
  CHECK(s == nullptr);

  CHECK(opp_scenario_parse("family = chess\nalgorithm = x\npricing = none\n"
                           "generator = uniform\nseed = 1\ntrials = 1\n",
                           &s) == OPP_ECONFIG);
  CHECK(opp_scenario_parse(nullptr, &s) == OPP_EINVAL);
  CHECK(opp_scenario_load("/nonexistent/scenario.ini", &s) == OPP_EIO);
}

TEST_CASE("scenario fields are readable and writable through the handle") {
  ScenarioHandle s;
  REQUIRE(opp_scenario_parse(kParkingScenario, &s.p) == OPP_OK);
  Out tie, fmt, fam;
  REQUIRE(opp_scenario_get(s.p, "tie_policy", &tie.s) == OPP_OK);
  CHECK(tie.str() == "first");
  REQUIRE(opp_scenario_get(s.p, "format", &fmt.s) == OPP_OK);
  CHECK(fmt.str() == "csv");
  REQUIRE(opp_scenario_get(s.p, "family", &fam.s) == OPP_OK);
  CHECK(fam.str() == "parking");
  Out bad;
  CHECK(opp_scenario_get(s.p, "flavour", &bad.s) == OPP_ECONFIG);

  CHECK(opp_scenario_set(s.p, "trials", "0") == OPP_ECONFIG);
  CHECK(opp_scenario_set(s.p, "trials", "2") == OPP_OK);
  Out trials;
  REQUIRE(opp_scenario_get(s.p, "trials", &trials.s) == OPP_OK);
  CHECK(trials.str() == "2");
  Out text;
  REQUIRE(opp_scenario_text(s.p, &text.s) == OPP_OK);
  CHECK(text.str().find("trials = 2") != std::string::npos);
}

TEST_CASE("a run produces rows, aggregates and tables") {
  ScenarioHandle s;
  REQUIRE(opp_scenario_parse(kParkingScenario, &s.p) == OPP_OK);
  ReportHandle r;
  REQUIRE(opp_run(s.p, &r.p) == OPP_OK);

  int n = 0;
  REQUIRE(opp_report_trials(r.p, &n) == OPP_OK);
  CHECK(n == 4);
  opp_trial_row row;
  REQUIRE(opp_report_row(r.p, 0, &row) == OPP_OK);
  CHECK(row.trial == 0);
  CHECK(row.ratio == doctest::Approx(row.cost / row.opt));
  CHECK(opp_report_row(r.p, 99, &row) == OPP_EINVAL);
  CHECK(opp_report_row(r.p, -1, &row) == OPP_EINVAL);

  double mx = 0, mean = 0, sd = -1;
  REQUIRE(opp_report_max_ratio(r.p, &mx) == OPP_OK);
  REQUIRE(opp_report_mean_ratio(r.p, &mean) == OPP_OK);
  REQUIRE(opp_report_std_ratio(r.p, &sd) == OPP_OK);
  CHECK(mx >= mean);
  CHECK(sd >= 0);

  Out csv;
  REQUIRE(opp_report_text(r.p, "csv", &csv.s) == OPP_OK);
  CHECK(csv.str().rfind("trial,family,algorithm,pricing,cost,opt,ratio,seed\n", 0) == 0);
  Out bad;
  CHECK(opp_report_text(r.p, "xml", &bad.s) == OPP_ECONFIG);

  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "opp-capi-test";
  fs::create_directories(dir);
  std::string path = (dir / "report.csv").string();
  REQUIRE(opp_report_write(r.p, path.c_str(), "csv") == OPP_OK);
  std::ifstream in(path);
  std::string first_line;
  std::getline(in, first_line);
  CHECK(first_line == "trial,family,algorithm,pricing,cost,opt,ratio,seed");
  fs::remove_all(dir);
}

TEST_CASE("generation is deterministic in the seed") {
  Out a, b, c;
  REQUIRE(opp_generate("parking", "adversarial", "n = 6\neps = 0.001\n", 3, &a.s) == OPP_OK);
  REQUIRE(opp_generate("parking", "adversarial", "n = 6\neps = 0.001\n", 3, &b.s) == OPP_OK);
  CHECK(a.str() == b.str());
  CHECK(a.str().find("family = parking") != std::string::npos);
  CHECK(opp_generate("parking", "bogus", "", 1, &c.s) == OPP_ECONFIG);
  CHECK(opp_generate(nullptr, "line", "", 1, &c.s) == OPP_EINVAL);
}

TEST_CASE("the traversal demo replays its fractions") {
  Out text;
  REQUIRE(opp_demo("appendix-a1", nullptr, &text.s) == OPP_OK);
  CHECK(text.str().find("fraction 2/3") != std::string::npos);
  CHECK(text.str().find("residual = 1") != std::string::npos);
  Out other;
  CHECK(opp_demo("unknown-demo", "", &other.s) == OPP_ECONFIG);
}

TEST_CASE("verification runs a named suite") {
  Out names;
  REQUIRE(opp_verify_names(&names.s) == OPP_OK);
  CHECK(names.str().find("mts-golden-fractions") != std::string::npos);
  CHECK(names.str().find("report-determinism") != std::string::npos);

  Out report;
  int all_passed = 0;
  REQUIRE(opp_verify("mts-golden-fractions", nullptr, &report.s, &all_passed) == OPP_OK);
  CHECK(all_passed == 1);
  CHECK(report.str() == "SUITE mts-golden-fractions PASS witness=-\n");

  Out bogus;
  CHECK(opp_verify("no-such-suite", nullptr, &bogus.s, &all_passed) == OPP_ECONFIG);
}

}  // TEST_SUITE
