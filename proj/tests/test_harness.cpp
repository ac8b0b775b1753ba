#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "generators.hpp"
#include "runner.hpp"
#include "scenario.hpp"

using namespace opp;
using namespace opp::harness;

namespace {

std::string parking_scenario_text() {
  return "family = parking\n"
         "algorithm = greedy\n"
         "pricing = none\n"
         "generator = adversarial\n"
         "seed = 3\n"
         "trials = 5\n"
         "\n[params]\n"
         "n = 6\n"
         "eps = 0.001\n";
}

std::string kserver_scenario_text(const std::string& algorithm) {
  return "family = kserver\n"
         "algorithm = " + algorithm + "\n"
         "pricing = none\n"
         "generator = line\n"
         "seed = 5\n"
         "trials = 8\n"
         "\n[params]\n"
         "k = 3\n"
         "requests = 12\n";
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("structured text parses and serializes canonically") {
  IniDoc doc = IniDoc::parse_text("b = 2\na = 1\n# comment\n[zeta]\nx = 1 2 3\n[alpha]\ny = hi\n");
  CHECK(doc.get("", "a") == "1");
  CHECK(doc.get("zeta", "x") == "1 2 3");
  CHECK(doc.get_doubles("zeta", "x") == std::vector<double>({1, 2, 3}));
  // canonical form sorts keys and sections and is a fixed point
  std::string canon = doc.canonical();
  CHECK(canon.find("a = 1\nb = 2\n") == 0);
  CHECK(canon.find("[alpha]") < canon.find("[zeta]"));
  CHECK(IniDoc::parse_text(canon).canonical() == canon);

  CHECK(doc.get_or("", "missing", "fb") == "fb");
  CHECK_THROWS_WITH_AS(doc.get("", "missing"), "missing field missing", config_error);
  CHECK_THROWS_AS(doc.get_double("alpha", "y"), config_error);
}

TEST_CASE("parse errors carry the line number") {
  try {
    IniDoc::parse_text("a = 1\nnonsense\n");
    FAIL("expected a parse error");
  } catch (const parse_error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(IniDoc::parse_text("a = 1\na = 2\n"), parse_error);
  CHECK_THROWS_AS(IniDoc::parse_text("[open\n"), parse_error);
}

TEST_CASE("floating point fields round-trip through text") {
  for (double v : {0.1, 1.0 / 3.0, 1e300, -0.0, 123456789.0, 2e-308, 6.97}) {
    std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(15.0) == "15");
}

TEST_CASE("scenario validation names the offending field") {
  Scenario s = scenario_parse(parking_scenario_text());
  CHECK(s.family == "parking");
  CHECK(s.trials == 5);
  CHECK(s.jobs == 1);
  CHECK(s.tie_policy == "first");  // default
  CHECK(s.format == "csv");        // default
  CHECK(s.param_double("eps") == 0.001);

  CHECK_THROWS_WITH_AS(scenario_parse("algorithm = greedy\n"), "missing field family",
                       config_error);
  CHECK_THROWS_AS(scenario_parse("family = tetris\nalgorithm = x\npricing = none\n"
                                 "generator = uniform\nseed = 1\ntrials = 1\n"),
                  config_error);
  std::string base = parking_scenario_text();
  Scenario t = scenario_parse(base);
  CHECK_THROWS_AS(scenario_set(t, "trials", "0"), config_error);
  CHECK_THROWS_AS(scenario_set(t, "format", "xml"), config_error);
  scenario_set(t, "trials", "2");
  CHECK(t.trials == 2);
  scenario_set(t, "format", "tsv");
  CHECK(t.format == "tsv");
}

TEST_CASE("instances round-trip through their text form") {
  IniDoc params;
  params.set("params", "m", "4");
  params.set("params", "tasks", "6");
  params.set("params", "k", "3");
  params.set("params", "requests", "8");
  params.set("params", "cars", "5");
  for (std::string family : {"mts", "kserver", "parking"}) {
    std::string gen = family == "parking" ? "line" : family == "kserver" ? "line" : "uniform";
    Instance a = generate_instance(family, gen, params, 42);
    Instance b = generate_instance(family, gen, params, 42);
    CHECK(instance_text(a) == instance_text(b));
    CHECK(instance_text(a).find("family = " + family) != std::string::npos);
    Instance back = instance_parse(instance_text(a));
    CHECK(instance_text(back) == instance_text(a));
    Instance other = generate_instance(family, gen, params, 43);
    CHECK(instance_text(other) != instance_text(a));
  }
  CHECK_THROWS_AS(generate_instance("parking", "bogus", params, 1), config_error);
  CHECK_THROWS_AS(generate_instance("chess", "uniform", params, 1), config_error);
}

TEST_CASE("tree instances survive the text round-trip") {
  IniDoc params;
  params.set("params", "vertices", "9");
  params.set("params", "k", "2");
  params.set("params", "requests", "6");
  Instance a = generate_instance("kserver", "tree", params, 7);
  REQUIRE(a.kserver.has_value());
  CHECK(a.kserver->on_tree);
  Instance back = instance_parse(instance_text(a));
  CHECK(instance_text(back) == instance_text(a));
  CHECK(back.kserver->server_vertices == a.kserver->server_vertices);
}

TEST_CASE("the cascade scenario shows the exponential greedy gap") {
  RunReport rep = run_scenario(scenario_parse(parking_scenario_text()));
  CHECK(rep.family == "parking");
  REQUIRE(static_cast<int>(rep.rows.size()) == 5);
  for (const TrialRow& row : rep.rows) {
    CHECK(row.ratio == poa_ratio(row.cost, row.opt));
    CHECK(row.ratio > 25);  // greedy pays a cascade, opt just over 1
  }
  // identical trials: the mean may exceed the max by a rounding ulp
  CHECK(rep.max_ratio >= rep.mean_ratio - 1e-12 * rep.mean_ratio);
  std::string csv = rep.csv();
  CHECK(csv.rfind("trial,family,algorithm,pricing,cost,opt,ratio,seed\n", 0) == 0);
  CHECK(rep.tsv().rfind("trial\tfamily", 0) == 0);
  std::string sum = rep.summary();
  CHECK(sum.find("max_ratio") != std::string::npos);
  CHECK(sum.find("trials = 5") != std::string::npos);
}

TEST_CASE("laziness never raises the cost on the shared instance stream") {
  RunReport dc = run_scenario(scenario_parse(kserver_scenario_text("dc")));
  RunReport lazy = run_scenario(scenario_parse(kserver_scenario_text("lazy")));
  REQUIRE(dc.rows.size() == lazy.rows.size());
  for (size_t i = 0; i < dc.rows.size(); ++i) {
    CHECK(lazy.rows[i].opt == dc.rows[i].opt);  // same derived instance seed
    CHECK(lazy.rows[i].cost <= dc.rows[i].cost + 1e-9);
  }
}

TEST_CASE("parallel execution reproduces the serial report") {
  Scenario s = scenario_parse(kserver_scenario_text("lazy"));
  RunReport serial = run_scenario(s);
  scenario_set(s, "jobs", "4");
  RunReport par = run_scenario(s);
  CHECK(par.csv() == serial.csv());
}

TEST_CASE("ratio conventions at a zero optimum") {
  CHECK(poa_ratio(6, 2) == 3);
  CHECK(poa_ratio(0, 0) == 1);
  CHECK(poa_ratio(3, 0) == std::numeric_limits<double>::infinity());
}

TEST_CASE("file generator replays a stored instance") {
  namespace fs = std::filesystem;
  IniDoc params;
  params.set("params", "cars", "4");
  Instance inst = generate_instance("parking", "line", params, 9);
  fs::path dir = fs::temp_directory_path() / "opp-harness-test";
  fs::create_directories(dir);
  std::string path = (dir / "instance.txt").string();
  write_file(path, instance_text(inst));

  std::string text =
      "family = parking\nalgorithm = greedy\npricing = none\ngenerator = file\n"
      "seed = 1\ntrials = 3\ninstance = " + path + "\n";
  RunReport rep = run_scenario(scenario_parse(text));
  REQUIRE(rep.rows.size() == 3);
  // greedy is deterministic, so every trial replays the same cost
  CHECK(rep.rows[1].cost == rep.rows[0].cost);
  CHECK(rep.rows[2].cost == rep.rows[0].cost);
  fs::remove_all(dir);

  CHECK_THROWS_AS(scenario_parse("family = parking\nalgorithm = greedy\npricing = none\n"
                                 "generator = file\nseed = 1\ntrials = 1\n"),
                  config_error);
  CHECK_THROWS_AS(instance_load((dir / "gone.txt").string()), io_error);
}

}  // TEST_SUITE
