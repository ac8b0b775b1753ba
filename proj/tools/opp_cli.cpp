// Command-line front end. Talks to the library exclusively through the C
// API in opp/opp.h.

#include <cstdint>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "opp/opp.h"

namespace {

struct StringOut {
  char* p = nullptr;
  ~StringOut() { opp_string_free(p); }
  char** out() { return &p; }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

int fail(opp_status status) {
  std::fprintf(stderr, "error: %s\n", opp_last_error());
  return static_cast<int>(status);
}

// Shared flags for the verbs that execute a scenario.
struct RunFlags {
  std::string seed, trials, jobs, tie_policy, format;
  std::string out;

  void attach(CLI::App* cmd) {
    cmd->add_option("--seed", seed, "root seed override");
    cmd->add_option("--trials", trials, "trial count override");
    cmd->add_option("--jobs", jobs, "max concurrent trials");
    cmd->add_option("--tie-policy", tie_policy, "first | last | uniform");
    cmd->add_option("--format", format, "csv | tsv");
    cmd->add_option("--out", out, "output path (default: scenario's out, else stdout)");
  }
};

using ScenarioPtr = std::unique_ptr<opp_scenario, decltype(&opp_scenario_free)>;
using ReportPtr = std::unique_ptr<opp_report, decltype(&opp_report_free)>;

int load_and_run(const std::string& path, const RunFlags& flags, ReportPtr& report,
                 std::string& format, std::string& out_path) {
  opp_scenario* raw = nullptr;
  if (opp_status st = opp_scenario_load(path.c_str(), &raw)) return fail(st);
  ScenarioPtr scenario(raw, opp_scenario_free);

  const std::pair<const char*, const std::string*> overrides[] = {
      {"seed", &flags.seed},       {"trials", &flags.trials},   {"jobs", &flags.jobs},
      {"tie_policy", &flags.tie_policy}, {"format", &flags.format}, {"out", &flags.out},
  };
  for (const auto& [key, value] : overrides) {
    if (value->empty()) continue;
    if (opp_status st = opp_scenario_set(scenario.get(), key, value->c_str())) return fail(st);
  }

  StringOut fmt, out;
  if (opp_status st = opp_scenario_get(scenario.get(), "format", fmt.out())) return fail(st);
  if (opp_status st = opp_scenario_get(scenario.get(), "out", out.out())) return fail(st);
  format = fmt.str();
  out_path = out.str();

  opp_report* rep = nullptr;
  if (opp_status st = opp_run(scenario.get(), &rep)) return fail(st);
  report = ReportPtr(rep, opp_report_free);
  return 0;
}

std::string join_args(const std::vector<std::string>& args) {
  std::string joined;
  for (const std::string& a : args) {
    if (!joined.empty()) joined += ' ';
    joined += a;
  }
  return joined;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"online posted-pricing playground"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(opp_version()));

  // run
  auto* run_cmd = app.add_subcommand("run", "execute a scenario and emit the trial table");
  std::string run_path;
  RunFlags run_flags;
  run_cmd->add_option("scenario", run_path, "scenario file")->required();
  run_flags.attach(run_cmd);

  // poa
  auto* poa_cmd = app.add_subcommand("poa", "execute a scenario and print the ratio summary");
  std::string poa_path;
  RunFlags poa_flags;
  poa_cmd->add_option("scenario", poa_path, "scenario file")->required();
  poa_flags.attach(poa_cmd);

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "generate an instance file");
  std::string gen_family, gen_generator, gen_out;
  std::vector<std::string> gen_params;
  std::uint64_t gen_seed = 1;
  gen_cmd->add_option("family", gen_family, "mts | kserver | parking")->required();
  gen_cmd->add_option("generator", gen_generator, "generator name")->required();
  gen_cmd->add_option("params", gen_params, "key=value generator parameters");
  gen_cmd->add_option("--seed", gen_seed, "generator seed (default 1)");
  gen_cmd->add_option("--out", gen_out, "output path (default stdout)");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "run property suites");
  std::string verify_suite = "all";
  std::string verify_dir = "witness";
  bool verify_list = false;
  verify_cmd->add_option("suite", verify_suite, "suite name (default all)");
  verify_cmd->add_option("--out", verify_dir, "witness directory (default witness)");
  verify_cmd->add_flag("--list", verify_list, "list suite names and exit");

  // demo
  auto* demo_cmd = app.add_subcommand("demo", "print a named walkthrough");
  std::string demo_name;
  std::vector<std::string> demo_args;
  demo_cmd->add_option("name", demo_name, "appendix-a1 | parking-gap")->required();
  demo_cmd->add_option("args", demo_args, "key=value overrides");

  CLI11_PARSE(app, argc, argv);

  if (*run_cmd) {
    ReportPtr report(nullptr, opp_report_free);
    std::string format, out_path;
    if (int rc = load_and_run(run_path, run_flags, report, format, out_path)) return rc;
    if (out_path.empty()) {
      StringOut text;
      if (opp_status st = opp_report_text(report.get(), format.c_str(), text.out()))
        return fail(st);
      std::fputs(text.p, stdout);
    } else {
      if (opp_status st = opp_report_write(report.get(), out_path.c_str(), format.c_str()))
        return fail(st);
      std::fprintf(stdout, "wrote %s\n", out_path.c_str());
    }
    return 0;
  }

  if (*poa_cmd) {
    ReportPtr report(nullptr, opp_report_free);
    std::string format, out_path;
    if (int rc = load_and_run(poa_path, poa_flags, report, format, out_path)) return rc;
    StringOut text;
    if (opp_status st = opp_report_summary(report.get(), text.out())) return fail(st);
    std::fputs(text.p, stdout);
    return 0;
  }

  if (*gen_cmd) {
    std::string params_text;
    for (const std::string& kv : gen_params) {
      auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) {
        std::fprintf(stderr, "error: expected key=value, got '%s'\n", kv.c_str());
        return 2;
      }
      params_text += kv.substr(0, eq) + " = " + kv.substr(eq + 1) + "\n";
    }
    StringOut text;
    if (opp_status st = opp_generate(gen_family.c_str(), gen_generator.c_str(),
                                     params_text.c_str(), gen_seed, text.out()))
      return fail(st);
    if (gen_out.empty()) {
      std::fputs(text.p, stdout);
      return 0;
    }
    std::FILE* f = std::fopen(gen_out.c_str(), "wb");
    if (!f || std::fputs(text.p, f) < 0 || std::fclose(f) != 0) {
      std::fprintf(stderr, "error: cannot write %s\n", gen_out.c_str());
      return static_cast<int>(OPP_EIO);
    }
    std::fprintf(stdout, "wrote %s\n", gen_out.c_str());
    return 0;
  }

  if (*verify_cmd) {
    if (verify_list) {
      StringOut names;
      if (opp_status st = opp_verify_names(names.out())) return fail(st);
      std::fputs(names.p, stdout);
      return 0;
    }
    StringOut report;
    int all_passed = 0;
    if (opp_status st =
            opp_verify(verify_suite.c_str(), verify_dir.c_str(), report.out(), &all_passed))
      return fail(st);
    std::fputs(report.p, stdout);
    return all_passed ? 0 : 1;
  }

  if (*demo_cmd) {
    StringOut text;
    std::string args = join_args(demo_args);
    if (opp_status st = opp_demo(demo_name.c_str(), args.c_str(), text.out())) return fail(st);
    std::fputs(text.p, stdout);
    return 0;
  }

  return 0;
}
