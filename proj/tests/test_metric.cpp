#include "doctest.h"

#include <cmath>
#include <vector>

#include "metric.hpp"

using namespace opp;
using metric::MetricSpace;

TEST_SUITE("metric") {

TEST_CASE("line space measures gaps") {
  MetricSpace s = MetricSpace::line({0, 1.5, 4, 8});
  CHECK(s.size() == 4);
  CHECK(s.kind() == metric::SpaceKind::line);
  CHECK(s.distance(0, 3) == 8);
  CHECK(s.distance(1, 2) == 2.5);
  CHECK(s.distance(2, 2) == 0);
  CHECK(s.position(1) == 1.5);
  CHECK_THROWS_AS(MetricSpace::line({0, 0}), input_error);
  CHECK_THROWS_AS(MetricSpace::line({3, 1}), input_error);
  CHECK_THROWS_AS(MetricSpace::line({}), input_error);
  CHECK_THROWS_AS(s.distance(0, 4), input_error);
}

TEST_CASE("tree space walks the unique path") {
  // 0 is the root; 1 and 2 hang off it, 3 hangs off 1
  MetricSpace t = MetricSpace::tree({-1, 0, 0, 1}, {0, 1, 2, 3});
  CHECK(t.size() == 4);
  CHECK(t.distance(3, 2) == 6);
  CHECK(t.distance(3, 0) == 4);
  CHECK(t.distance(1, 2) == 3);
  CHECK(t.path_next(3, 2) == 1);
  CHECK(t.path_next(1, 2) == 0);
  CHECK(t.edge_weight(0, 1) == 1);
  CHECK(t.edge_weight(1, 0) == 1);
  CHECK(t.adjacency()[0].size() == 2);
  CHECK_THROWS_AS(t.edge_weight(3, 2), input_error);           // not adjacent
  CHECK_THROWS_AS(MetricSpace::tree({-1, 0}, {0, 0}), input_error);   // zero weight
  CHECK_THROWS_AS(MetricSpace::tree({-1, 2, 1}, {0, 1, 1}), input_error);  // cycle
}

TEST_CASE("matrix space validates the axioms") {
  MetricSpace m = MetricSpace::matrix({{0, 2, 3}, {2, 0, 4}, {3, 4, 0}});
  CHECK(m.distance(1, 2) == 4);
  CHECK_THROWS_AS(MetricSpace::matrix({{0, 2}, {3, 0}}), input_error);   // asymmetric
  CHECK_THROWS_AS(MetricSpace::matrix({{0, -1}, {-1, 0}}), input_error); // negative
  CHECK_THROWS_AS(MetricSpace::matrix({{1, 2}, {2, 0}}), input_error);   // diagonal
  // 0-2 direct distance 9 exceeds the 0-1-2 route
  CHECK_THROWS_AS(MetricSpace::matrix({{0, 2, 9}, {2, 0, 4}, {9, 4, 0}}), input_error);
}

TEST_CASE("canonical matching is the sorted pairing") {
  metric::Matching m = metric::canonical_matching({0, 5}, {1, 6});
  CHECK(m.cost == 2);
  CHECK(m.to_y == std::vector<int>({0, 1}));
  CHECK(metric::canonical_matching({}, {}).cost == 0);
  CHECK_THROWS_AS(metric::canonical_matching({1, 0}, {0, 1}), input_error);
  CHECK_THROWS_AS(metric::canonical_matching({0}, {0, 1}), input_error);
}

TEST_CASE("oracle finds the brute-force optimum") {
  std::vector<double> xs = {0, 4, 9}, ys = {1, 2, 10};
  auto cost = [&](int i, int j) { return std::abs(xs[i] - ys[j]); };
  metric::Matching m = metric::min_cost_matching_oracle(3, cost);
  CHECK(m.cost == 4);  // 0-1, 4-2, 9-10
  CHECK(m.to_y == std::vector<int>({0, 1, 2}));
}

TEST_CASE("rematching keeps the cost while making r local") {
  // canonical pairs 1 with 3, but 2 lies strictly between them
  std::vector<double> xs = {0, 1}, ys = {2, 3};
  metric::Matching base = metric::canonical_matching(xs, ys);
  CHECK(base.cost == 4);
  auto dxy = [&](int i, int j) { return std::abs(xs[i] - ys[j]); };
  auto dyy = [&](int i, int j) { return std::abs(ys[i] - ys[j]); };
  metric::Matching local = metric::r_local_matching(2, 1, dxy, dyy, base);
  CHECK(local.cost == 4);
  CHECK(local.to_y[1] == 0);  // x=1 now pairs with the adjacent y=2
}

TEST_CASE("rectangular assignment picks the cheap columns") {
  std::vector<int> a = metric::assign_min_cost({{5, 3}});
  CHECK(a == std::vector<int>({1}));
  std::vector<int> b = metric::assign_min_cost({{1, 10, 10}, {10, 10, 2}});
  CHECK(b == std::vector<int>({0, 2}));
  CHECK_THROWS_AS(metric::assign_min_cost({{1}, {2}}), input_error);  // more rows than columns
}

TEST_CASE("traversal distance sums consecutive steps") {
  MetricSpace m = MetricSpace::matrix({{0, 2, 3}, {2, 0, 4}, {3, 4, 0}});
  // three periods of (0 1 0 2), materialized
  std::vector<int> tau = {0, 1, 0, 2, 0, 1, 0, 2, 0, 1, 0, 2};
  CHECK(metric::traversal_distance(tau, m, 1, 2) == 2);
  CHECK(metric::traversal_distance(tau, m, 1, 4) == 7);
  CHECK(metric::traversal_distance(tau, m, 4, 1) == 7);  // order-insensitive
  CHECK(metric::traversal_distance(tau, m, 4, 5) == 3);
  CHECK(metric::traversal_distance(tau, m, 1, 9) == 20);
  CHECK(metric::traversal_distance(tau, m, 3, 3) == 0);
  CHECK_THROWS_AS(metric::traversal_distance(tau, m, 0, 2), input_error);
  CHECK_THROWS_AS(metric::traversal_distance(tau, m, 1, 13), input_error);
}

}  // TEST_SUITE
