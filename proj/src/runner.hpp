#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "generators.hpp"
#include "scenario.hpp"

namespace opp::harness {

struct TrialRow {
  int trial = 0;
  double cost = 0;
  double opt = 0;
  double ratio = 0;
  std::uint64_t seed = 0;  // derived per-trial seed, reproducible in isolation
};

struct RunReport {
  std::string family;
  std::string algorithm;
  std::string pricing;
  std::vector<TrialRow> rows;
  double max_ratio = 0;
  double mean_ratio = 0;
  double std_ratio = 0;

  // header + one row per trial, sorted by trial index
  std::string table(const std::string& sep) const;
  std::string csv() const { return table(","); }
  std::string tsv() const { return table("\t"); }
  std::string summary() const;
};

// cost/OPT with the zero-optimum convention (0/0 = 1, x/0 = inf).
double poa_ratio(double cost, double opt);

// Executes all trials of the scenario, serially or on s.jobs threads.
// Trial t is fully determined by derive_seed(s.seed, t).
RunReport run_scenario(const Scenario& s);

// One trial against an explicit instance (shared instances pass their
// precomputed optimum; pass opt < 0 to recompute).
TrialRow run_one_trial(const Scenario& s, const Instance& inst, int trial, double opt);

double instance_opt(const Instance& inst);

}  // namespace opp::harness
