#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "metric.hpp"
#include "parking.hpp"
#include "rng.hpp"
#include "scenario.hpp"

namespace opp::harness {

struct MtsInstance {
  metric::MetricSpace space;
  int s0 = 0;
  std::vector<std::vector<double>> tasks;
};

// Line instances carry coordinates, tree instances vertex ids over `space`.
struct KserverInstance {
  bool on_tree = false;
  std::vector<double> servers;
  std::vector<double> requests;
  std::optional<metric::MetricSpace> space;
  std::vector<int> server_vertices;
  std::vector<int> request_vertices;
};

struct Instance {
  std::string family;
  std::optional<MtsInstance> mts;
  std::optional<KserverInstance> kserver;
  std::optional<parking::ParkingInstance> parking;
};

// Generators are deterministic in (generator name, params, rng state).
// Parameters are read from the [params] section, falling back to top level.
//   mts:      uniform(m, tasks)
//   kserver:  line(k, requests, server_span, span) | tree(vertices, k, requests)
//   parking:  line(cars, band, density) | adversarial(n, eps) | clustered(cars)
MtsInstance gen_mts(const std::string& generator, const IniDoc& params, Rng& rng);
KserverInstance gen_kserver(const std::string& generator, const IniDoc& params, Rng& rng);
parking::ParkingInstance gen_parking(const std::string& generator, const IniDoc& params, Rng& rng);

Instance generate_instance(const std::string& family, const std::string& generator,
                           const IniDoc& params, std::uint64_t seed);

// Canonical text form; parse(text(i)) reproduces i.
std::string instance_text(const Instance& inst);
Instance instance_parse(const std::string& text);
Instance instance_load(const std::string& path);

}  // namespace opp::harness
