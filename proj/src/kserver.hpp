#pragma once

#include <cstdint>
#include <vector>

#include "errors.hpp"
#include "metric.hpp"

namespace opp::kserver {

// Server positions indexed by server id, with cumulative travel kept for
// the Balance2 scheme. Coincident positions are allowed.
struct ServerConfig {
  std::vector<double> pos;
  std::vector<double> travel;

  explicit ServerConfig(std::vector<double> p)
      : pos(std::move(p)), travel(pos.size(), 0.0) {}
  ServerConfig() = default;
  int k() const { return static_cast<int>(pos.size()); }
};

// Ids sorted by (position, id).
std::vector<int> sorted_order(const std::vector<double>& pos);

struct StepResult {
  int served = -1;
  double cost = 0;
};

// Double Coverage on a line: both neighbours of r move toward it by the
// smaller of the two distances; the reacher serves (left on a tie).
StepResult dc_step(ServerConfig& cfg, double r);

struct VirtualPair {
  ServerConfig virt;
  ServerConfig real;
};

struct LazyResult {
  int served = -1;
  double real_cost = 0;
  double virtual_cost = 0;
};

// Lazy transform of DC: the virtual config advances with dc_step, the real
// server matched to r in the r-canonical matching jumps onto r.
LazyResult lazy_step(VirtualPair& pair, double r);

// Hypothetical query: the real server id that lazy_step would serve r with.
// Works on a copy; the caller's pair is untouched.
int lazy_owner(const VirtualPair& pair, double r);

// Region partition of the line for the current pair state: thresholds[i]
// separates the regions of the i-th and (i+1)-th real servers in sorted
// order. Located by bisection against lazy_owner, snapped to the exact
// virtual midpoint or server position when within tolerance.
struct RegionMap {
  std::vector<int> order;         // real server ids, sorted
  std::vector<double> anchors;    // sorted real positions
  std::vector<double> thresholds; // k-1 points, thresholds[i] in [anchor i, anchor i+1]
};

RegionMap regions(const VirtualPair& pair);

// Sorted rank of the region containing r; requests exactly at a threshold
// belong to the left region, matching the DC tie rule.
int region_rank(const RegionMap& map, double r);
int region_owner(const RegionMap& map, double r);  // server id

// Thresholds coinciding with a server position move eps away from it, so
// that every region has positive width on both sides of its server.
RegionMap perturb_thresholds(RegionMap map, double eps);

// Prices per server id satisfying P(s) + d(s,v) = P(s') + d(s',v) at every
// threshold v, shifted so the minimum is zero.
std::vector<double> server_prices(const RegionMap& map);

// Balance2: price = half the cumulative travel. Requires k = 2.
std::vector<double> balance2_prices(const ServerConfig& cfg);

// Disutility per server id.
std::vector<double> kserver_agent_options(const std::vector<double>& prices,
                                          const ServerConfig& cfg, double r);

// Exact offline optimum on a line via DP over server position multisets.
double kserver_offline_opt(const std::vector<double>& requests, const std::vector<double>& initial);

// Tree analogue over vertex-id multisets.
double kserver_offline_opt_tree(const metric::MetricSpace& t, const std::vector<int>& requests,
                                const std::vector<int>& initial);

// ---- tree metrics ----------------------------------------------------
// Points live on the continuous tree: either a vertex or strictly inside
// the edge (parent[child], child), `offset` measured from the parent.
struct TreePoint {
  int vertex = -1;
  int edge_child = -1;
  double offset = 0;

  static TreePoint at_vertex(int v) { return {v, -1, 0}; }
  static TreePoint on_edge(const metric::MetricSpace& t, int child, double offset);
  bool is_vertex() const { return vertex >= 0; }
  friend bool operator==(const TreePoint& a, const TreePoint& b) {
    return a.vertex == b.vertex && a.edge_child == b.edge_child && a.offset == b.offset;
  }
};

double tree_distance(const metric::MetricSpace& t, const TreePoint& p, const TreePoint& q);
// Walks p along the unique path toward target by `dist` (capped at target).
TreePoint tree_move(const metric::MetricSpace& t, const TreePoint& p, const TreePoint& target,
                    double dist);

struct TreeConfig {
  std::vector<TreePoint> pos;
  std::vector<double> travel;

  explicit TreeConfig(std::vector<TreePoint> p) : pos(std::move(p)), travel(pos.size(), 0.0) {}
  TreeConfig() = default;
  int k() const { return static_cast<int>(pos.size()); }
};

// Tree Double Coverage: all servers adjacent to r move toward it at equal
// rate; a server stops when another server appears on its path (event-driven,
// no time stepping). The reacher serves; ties go to the smallest id.
StepResult dc_step_tree(const metric::MetricSpace& t, TreeConfig& cfg, const TreePoint& r);

struct TreePair {
  TreeConfig virt;
  TreeConfig real;
};

LazyResult lazy_step_tree(const metric::MetricSpace& t, TreePair& pair, const TreePoint& r);
int lazy_owner_tree(const metric::MetricSpace& t, const TreePair& pair, const TreePoint& r);

// Region boundaries on a tree: one threshold point per adjacent region pair,
// found by scanning every edge for ownership transitions.
struct TreeRegionMap {
  std::vector<int> vertex_owner;  // server id owning each vertex
  struct Boundary {
    int left_server;
    int right_server;
    TreePoint threshold;
  };
  std::vector<Boundary> boundaries;
};

TreeRegionMap regions_tree(const metric::MetricSpace& t, const TreePair& pair);

// BFS solution of the threshold equations over the region-adjacency tree.
std::vector<double> server_prices_tree(const metric::MetricSpace& t, const TreeRegionMap& map,
                                       const TreeConfig& real);

}  // namespace opp::kserver
