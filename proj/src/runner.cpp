#include "runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "agents.hpp"
#include "kserver.hpp"
#include "mts.hpp"
#include "parking.hpp"

namespace opp::harness {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Stream ids under one trial seed; the instance stream is separate so that
// tie-break draws cannot shift the generated instance.
constexpr std::uint64_t kInstanceStream = 0;
constexpr std::uint64_t kDecisionStream = 1;
// Shared-instance stream under the root seed (parking, generator != file).
constexpr std::uint64_t kSharedStream = 0x7fffffffULL;

void check_combo(const Scenario& s) {
  auto bad = [&](const std::string& what) {
    throw config_error(what + ": unsupported for family " + s.family + " (algorithm " +
                       s.algorithm + ", pricing " + s.pricing + ")");
  };
  if (s.family == "mts") {
    if (s.algorithm == "traversal" || s.algorithm == "follow") {
      if (s.pricing != "none") bad("pricing");
    } else if (s.algorithm == "agents") {
      if (s.pricing != "none" && s.pricing != "traversal") bad("pricing");
    } else {
      bad("algorithm");
    }
  } else if (s.family == "kserver") {
    if (s.algorithm == "dc" || s.algorithm == "lazy") {
      if (s.pricing != "none") bad("pricing");
    } else if (s.algorithm == "agents") {
      if (s.pricing != "none" && s.pricing != "thresholds" && s.pricing != "balance2")
        bad("pricing");
    } else {
      bad("algorithm");
    }
  } else if (s.family == "parking") {
    if (s.algorithm == "greedy" || s.algorithm == "harmonic") {
      if (s.pricing != "none") bad("pricing");
    } else if (s.algorithm == "agents") {
      if (s.pricing != "none" && s.pricing != "harmonic" && s.pricing != "monotone" &&
          s.pricing != "min-sum")
        bad("pricing");
    } else {
      bad("algorithm");
    }
  } else {
    bad("family");
  }
}

agents::TiePolicy scenario_policy(const Scenario& s) {
  agents::TiePolicy policy = agents::tie_policy_from_name(s.tie_policy);
  if (policy == agents::TiePolicy::adversarial)
    throw config_error("tie_policy: adversarial requires a programmatic callback");
  return policy;
}

double run_mts_cost(const Scenario& s, const MtsInstance& inst, Rng& rng) {
  mts::TaskSystem sys(inst.space, inst.s0, mts::default_traversal(inst.space, inst.s0));
  if (s.algorithm == "traversal") {
    auto cursor = sys.cursor();
    for (const auto& w : inst.tasks) cursor.step(w);
    return cursor.delta(1, cursor.position()) + cursor.total_work();
  }
  if (s.algorithm == "follow") {
    mts::FollowState st(sys);
    for (const auto& w : inst.tasks) st.step(w);
    return st.follow_cost();
  }
  agents::TiePolicy policy = scenario_policy(s);
  mts::PricingScheme scheme(sys);
  std::vector<double> zero(static_cast<std::size_t>(inst.space.size()), 0.0);
  int prev = inst.s0;
  double cost = 0;
  for (const auto& w : inst.tasks) {
    std::vector<double> prices = s.pricing == "traversal" ? scheme.prices(prev) : zero;
    std::vector<double> options = mts::mts_agent_options(prices, prev, w, inst.space);
    agents::Decision d = agents::decide(options, policy, &rng);
    cost += w[static_cast<std::size_t>(d.choice)] + inst.space.distance(prev, d.choice);
    if (s.pricing == "traversal")
      scheme.observe({d.choice, w[static_cast<std::size_t>(d.choice)]}, prev);
    prev = d.choice;
  }
  return cost;
}

double min_positive_gap(const std::vector<double>& pos) {
  std::vector<double> sorted = pos;
  std::sort(sorted.begin(), sorted.end());
  double best = kInf;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    double g = sorted[i] - sorted[i - 1];
    if (g > 0) best = std::min(best, g);
  }
  return std::isfinite(best) ? best : 1.0;
}

double run_kserver_line_cost(const Scenario& s, const KserverInstance& inst, Rng& rng) {
  if (s.algorithm == "dc") {
    kserver::ServerConfig cfg(inst.servers);
    double cost = 0;
    for (double r : inst.requests) cost += kserver::dc_step(cfg, r).cost;
    return cost;
  }
  if (s.algorithm == "lazy") {
    kserver::VirtualPair pair{kserver::ServerConfig(inst.servers),
                              kserver::ServerConfig(inst.servers)};
    double cost = 0;
    for (double r : inst.requests) cost += kserver::lazy_step(pair, r).real_cost;
    return cost;
  }
  agents::TiePolicy policy = scenario_policy(s);
  double cost = 0;
  if (s.pricing == "balance2") {
    kserver::ServerConfig cfg(inst.servers);
    for (double r : inst.requests) {
      std::vector<double> prices = kserver::balance2_prices(cfg);
      agents::Decision d =
          agents::decide(kserver::kserver_agent_options(prices, cfg, r), policy, &rng);
      double move = std::abs(cfg.pos[static_cast<std::size_t>(d.choice)] - r);
      cost += move;
      cfg.travel[static_cast<std::size_t>(d.choice)] += move;
      cfg.pos[static_cast<std::size_t>(d.choice)] = r;
    }
    return cost;
  }
  kserver::VirtualPair pair{kserver::ServerConfig(inst.servers),
                            kserver::ServerConfig(inst.servers)};
  double eps_base = 1e-6 * min_positive_gap(inst.servers);
  int arrival = 0;
  for (double r : inst.requests) {
    std::vector<double> prices(inst.servers.size(), 0.0);
    if (s.pricing == "thresholds") {
      kserver::RegionMap map = kserver::regions(pair);
      map = kserver::perturb_thresholds(std::move(map), eps_base * std::ldexp(1.0, -arrival));
      prices = kserver::server_prices(map);
    }
    agents::Decision d =
        agents::decide(kserver::kserver_agent_options(prices, pair.real, r), policy, &rng);
    cost += std::abs(pair.real.pos[static_cast<std::size_t>(d.choice)] - r);
    // the simulation advances on the request alone; the chosen car serves
    kserver::dc_step(pair.virt, r);
    pair.real.pos[static_cast<std::size_t>(d.choice)] = r;
    ++arrival;
  }
  return cost;
}

double run_kserver_tree_cost(const Scenario& s, const KserverInstance& inst, Rng& rng) {
  const metric::MetricSpace& t = *inst.space;
  auto points = [&]() {
    std::vector<kserver::TreePoint> p;
    for (int v : inst.server_vertices) p.push_back(kserver::TreePoint::at_vertex(v));
    return p;
  };
  if (s.algorithm == "dc") {
    kserver::TreeConfig cfg(points());
    double cost = 0;
    for (int r : inst.request_vertices)
      cost += kserver::dc_step_tree(t, cfg, kserver::TreePoint::at_vertex(r)).cost;
    return cost;
  }
  if (s.algorithm == "lazy") {
    kserver::TreePair pair{kserver::TreeConfig(points()), kserver::TreeConfig(points())};
    double cost = 0;
    for (int r : inst.request_vertices)
      cost += kserver::lazy_step_tree(t, pair, kserver::TreePoint::at_vertex(r)).real_cost;
    return cost;
  }
  if (s.pricing == "balance2")
    throw config_error("pricing: balance2 is defined on the line only");
  agents::TiePolicy policy = scenario_policy(s);
  kserver::TreePair pair{kserver::TreeConfig(points()), kserver::TreeConfig(points())};
  double cost = 0;
  for (int rv : inst.request_vertices) {
    kserver::TreePoint r = kserver::TreePoint::at_vertex(rv);
    std::vector<double> prices(inst.server_vertices.size(), 0.0);
    if (s.pricing == "thresholds") {
      kserver::TreeRegionMap map = kserver::regions_tree(t, pair);
      prices = kserver::server_prices_tree(t, map, pair.real);
    }
    std::vector<double> options(prices.size());
    for (std::size_t i = 0; i < options.size(); ++i)
      options[i] = prices[i] + kserver::tree_distance(t, pair.real.pos[i], r);
    agents::Decision d = agents::decide(options, policy, &rng);
    cost += kserver::tree_distance(t, pair.real.pos[static_cast<std::size_t>(d.choice)], r);
    kserver::dc_step_tree(t, pair.virt, r);
    pair.real.pos[static_cast<std::size_t>(d.choice)] = r;
  }
  return cost;
}

double run_parking_cost(const Scenario& s, const parking::ParkingInstance& inst, Rng& rng) {
  std::vector<char> occupied = inst.occupied;
  if (s.algorithm == "greedy") {
    double cost = 0;
    for (double g : inst.goals) cost += parking::greedy_step(inst.slots, occupied, g).cost;
    return cost;
  }
  if (s.algorithm == "harmonic") {
    double cost = 0;
    for (double g : inst.goals) cost += parking::harmonic_step(inst.slots, occupied, g, rng).cost;
    return cost;
  }
  agents::TiePolicy policy = scenario_policy(s);
  double margin = parking::strict_margin(inst.slots);
  double cost = 0;
  for (double g : inst.goals) {
    std::vector<double> prices(inst.slots.size(), 0.0);
    if (s.pricing == "harmonic") {
      prices = parking::harmonic_prices(inst.slots, occupied, rng);
    } else if (s.pricing == "monotone") {
      prices = parking::monotone_prices(inst.slots, occupied, rng);
    } else if (s.pricing == "min-sum") {
      parking::BlockStructure bs = parking::blocks(inst.slots, occupied);
      std::vector<double> offsets = parking::sample_block_offsets(bs, margin, rng);
      prices = parking::min_sum_prices(inst.slots, occupied, offsets);
    } else {
      for (std::size_t v = 0; v < prices.size(); ++v)
        if (occupied[v]) prices[v] = kInf;
    }
    std::vector<double> options(prices.size());
    for (std::size_t v = 0; v < options.size(); ++v)
      options[v] = prices[v] + std::abs(inst.slots[v] - g);
    agents::Decision d = agents::decide(options, policy, &rng);
    cost += std::abs(inst.slots[static_cast<std::size_t>(d.choice)] - g);
    occupied[static_cast<std::size_t>(d.choice)] = 1;
  }
  return cost;
}

Instance trial_instance(const Scenario& s, Rng& inst_rng) {
  Instance inst;
  inst.family = s.family;
  IniDoc params = s.doc;
  if (s.family == "mts")
    inst.mts = gen_mts(s.generator, params, inst_rng);
  else if (s.family == "kserver")
    inst.kserver = gen_kserver(s.generator, params, inst_rng);
  else
    inst.parking = gen_parking(s.generator, params, inst_rng);
  return inst;
}

}  // namespace

double poa_ratio(double cost, double opt) {
  if (opt > 0) return cost / opt;
  return cost == 0 ? 1.0 : kInf;
}

double instance_opt(const Instance& inst) {
  if (inst.family == "mts") return mts::mts_offline_opt(inst.mts->tasks, inst.mts->space, inst.mts->s0);
  if (inst.family == "kserver") {
    if (inst.kserver->on_tree)
      return kserver::kserver_offline_opt_tree(*inst.kserver->space, inst.kserver->request_vertices,
                                               inst.kserver->server_vertices);
    return kserver::kserver_offline_opt(inst.kserver->requests, inst.kserver->servers);
  }
  if (inst.family == "parking")
    return parking::matching_offline_opt(inst.parking->slots, inst.parking->occupied,
                                         inst.parking->goals);
  throw input_error("instance_opt: unknown family '" + inst.family + "'");
}

TrialRow run_one_trial(const Scenario& s, const Instance& inst, int trial, double opt) {
  std::uint64_t trial_seed = derive_seed(s.seed, static_cast<std::uint64_t>(trial));
  Rng rng(derive_seed(trial_seed, kDecisionStream));
  if (opt < 0) opt = instance_opt(inst);
  TrialRow row;
  row.trial = trial;
  row.seed = trial_seed;
  row.opt = opt;
  if (s.family == "mts")
    row.cost = run_mts_cost(s, *inst.mts, rng);
  else if (s.family == "kserver")
    row.cost = inst.kserver->on_tree ? run_kserver_tree_cost(s, *inst.kserver, rng)
                                     : run_kserver_line_cost(s, *inst.kserver, rng);
  else
    row.cost = run_parking_cost(s, *inst.parking, rng);
  row.ratio = poa_ratio(row.cost, row.opt);
  return row;
}

RunReport run_scenario(const Scenario& s) {
  check_combo(s);
  scenario_policy(s);  // rejects callback-only policies up front

  bool shared = s.generator == "file" || s.family == "parking";
  Instance shared_inst;
  double shared_opt = -1;
  if (shared) {
    if (s.generator == "file") {
      shared_inst = instance_load(s.instance_path);
      if (shared_inst.family != s.family)
        throw config_error("instance: family mismatch (file says " + shared_inst.family + ")");
    } else {
      Rng inst_rng(derive_seed(s.seed, kSharedStream));
      shared_inst = trial_instance(s, inst_rng);
    }
    shared_opt = instance_opt(shared_inst);
  }

  RunReport report;
  report.family = s.family;
  report.algorithm = s.algorithm;
  report.pricing = s.pricing;
  report.rows.resize(static_cast<std::size_t>(s.trials));

  auto work_one = [&](int trial) {
    if (shared) {
      report.rows[static_cast<std::size_t>(trial)] = run_one_trial(s, shared_inst, trial, shared_opt);
    } else {
      std::uint64_t trial_seed = derive_seed(s.seed, static_cast<std::uint64_t>(trial));
      Rng inst_rng(derive_seed(trial_seed, kInstanceStream));
      Instance inst = trial_instance(s, inst_rng);
      report.rows[static_cast<std::size_t>(trial)] = run_one_trial(s, inst, trial, -1);
    }
  };

  int jobs = std::min(s.jobs, s.trials);
  if (jobs <= 1) {
    for (int trial = 0; trial < s.trials; ++trial) work_one(trial);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w)
      pool.emplace_back([&]() {
        for (;;) {
          int trial = next.fetch_add(1);
          if (trial >= s.trials) return;
          try {
            work_one(trial);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mu);
            if (!first_error) first_error = std::current_exception();
            return;
          }
        }
      });
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  double sum = 0, sum2 = 0;
  report.max_ratio = 0;
  for (const TrialRow& row : report.rows) {
    report.max_ratio = std::max(report.max_ratio, row.ratio);
    sum += row.ratio;
    sum2 += row.ratio * row.ratio;
  }
  double n = static_cast<double>(report.rows.size());
  report.mean_ratio = sum / n;
  double var = sum2 / n - report.mean_ratio * report.mean_ratio;
  report.std_ratio = var > 0 ? std::sqrt(var) : 0.0;
  return report;
}

std::string RunReport::table(const std::string& sep) const {
  std::string out = "trial" + sep + "family" + sep + "algorithm" + sep + "pricing" + sep + "cost" +
                    sep + "opt" + sep + "ratio" + sep + "seed\n";
  for (const TrialRow& row : rows) {
    out += std::to_string(row.trial) + sep + family + sep + algorithm + sep + pricing + sep +
           format_double(row.cost) + sep + format_double(row.opt) + sep + format_double(row.ratio) +
           sep + std::to_string(row.seed) + "\n";
  }
  return out;
}

std::string RunReport::summary() const {
  std::string out = "family = " + family + "\nalgorithm = " + algorithm + "\npricing = " + pricing +
                    "\ntrials = " + std::to_string(rows.size()) + "\n";
  out += "max_ratio = " + format_double(max_ratio) + "\n";
  out += "mean_ratio = " + format_double(mean_ratio) + "\n";
  out += "std_ratio = " + format_double(std_ratio) + "\n";
  return out;
}

}  // namespace opp::harness
