#include "doctest.h"

#include <cmath>
#include <vector>

#include "kserver.hpp"
#include "metric.hpp"

using namespace opp;
using kserver::ServerConfig;
using kserver::TreePoint;

TEST_SUITE("kserver") {

TEST_CASE("double coverage moves both neighbours") {
  ServerConfig cfg({0, 10});
  kserver::StepResult res = kserver::dc_step(cfg, 4);
  CHECK(res.served == 0);
  CHECK(res.cost == 8);
  CHECK(cfg.pos == std::vector<double>({4, 6}));
  CHECK(cfg.travel == std::vector<double>({4, 4}));

  SUBCASE("outside the hull only the outer server moves") {
    kserver::StepResult r2 = kserver::dc_step(cfg, 20);
    CHECK(r2.served == 1);
    CHECK(r2.cost == 14);
    CHECK(cfg.pos == std::vector<double>({4, 20}));
  }
  SUBCASE("ties serve the left server") {
    kserver::StepResult r2 = kserver::dc_step(cfg, 5);
    CHECK(r2.served == 0);
    CHECK(r2.cost == 2);
    CHECK(cfg.pos == std::vector<double>({5, 5}));
  }
}

TEST_CASE("lazy transform moves one real server onto the request") {
  kserver::VirtualPair pair{ServerConfig({0, 10}), ServerConfig({0, 10})};
  kserver::LazyResult res = kserver::lazy_step(pair, 4);
  CHECK(res.served == 0);
  CHECK(res.real_cost == 4);
  CHECK(res.virtual_cost == 8);
  CHECK(pair.virt.pos == std::vector<double>({4, 6}));
  CHECK(pair.real.pos == std::vector<double>({4, 10}));
  // the hypothetical query leaves the pair untouched
  int owner = kserver::lazy_owner(pair, 9.5);
  CHECK(owner == 1);
  CHECK(pair.real.pos == std::vector<double>({4, 10}));
}

TEST_CASE("regions equalize price plus distance at the threshold") {
  kserver::VirtualPair pair{ServerConfig({6, 8}), ServerConfig({0, 10})};
  kserver::RegionMap map = kserver::regions(pair);
  REQUIRE(map.thresholds.size() == 1);
  CHECK(map.thresholds[0] == doctest::Approx(7).epsilon(1e-6));
  CHECK(map.order == std::vector<int>({0, 1}));
  CHECK(kserver::region_owner(map, 6.9) == 0);
  CHECK(kserver::region_owner(map, 7.1) == 1);

  std::vector<double> prices = kserver::server_prices(map);
  CHECK(prices[0] == doctest::Approx(0).epsilon(1e-6));
  CHECK(prices[1] == doctest::Approx(4).epsilon(1e-6));

  std::vector<double> options = kserver::kserver_agent_options(prices, pair.real, 5.0);
  CHECK(options[0] == doctest::Approx(5).epsilon(1e-6));   // |0-5| + 0
  CHECK(options[1] == doctest::Approx(9).epsilon(1e-6));   // |10-5| + 4
}

TEST_CASE("perturbation pushes thresholds off the servers") {
  // virtual and real coincide, so the threshold sits on the midpoint 5,
  // and after a request at 5 the left server carries the request exactly
  kserver::VirtualPair pair{ServerConfig({0, 10}), ServerConfig({0, 10})};
  kserver::lazy_step(pair, 5);  // real: {5, 10}, virtual: {5, 5}
  kserver::RegionMap map = kserver::regions(pair);
  kserver::RegionMap pm = kserver::perturb_thresholds(map, 1e-3);
  for (std::size_t i = 0; i < pm.thresholds.size(); ++i) {
    CHECK(pm.thresholds[i] >= pm.anchors[i]);
    CHECK(pm.thresholds[i] <= pm.anchors[i + 1]);
    CHECK(pm.thresholds[i] != pm.anchors[i]);
    CHECK(pm.thresholds[i] != pm.anchors[i + 1]);
  }
}

TEST_CASE("balance2 prices are half the travel") {
  ServerConfig cfg({0, 10});
  kserver::dc_step(cfg, 4);
  std::vector<double> prices = kserver::balance2_prices(cfg);
  CHECK(prices == std::vector<double>({2, 2}));
  CHECK_THROWS_AS(kserver::balance2_prices(ServerConfig({0, 1, 2})), input_error);
}

TEST_CASE("line offline optimum") {
  CHECK(kserver::kserver_offline_opt({4}, {0, 10}) == 4);
  CHECK(kserver::kserver_offline_opt({4, 0}, {0, 10}) == 6);
  CHECK(kserver::kserver_offline_opt({}, {3}) == 0);
  CHECK_THROWS_AS(kserver::kserver_offline_opt({1}, {0, 1, 2, 3, 4, 5, 6}), input_error);
}

TEST_CASE("tree double coverage on a star") {
  metric::MetricSpace t = metric::MetricSpace::tree({-1, 0, 0, 0}, {0, 1, 1, 1});
  kserver::TreeConfig cfg({TreePoint::at_vertex(1), TreePoint::at_vertex(2)});
  kserver::StepResult res = kserver::dc_step_tree(t, cfg, TreePoint::at_vertex(3));
  // both servers reach the hub together; the smaller id passes through
  CHECK(res.served == 0);
  CHECK(res.cost == 3);
  CHECK(cfg.pos[0] == TreePoint::at_vertex(3));
  CHECK(cfg.pos[1] == TreePoint::at_vertex(0));
}

TEST_CASE("tree points move along the path") {
  metric::MetricSpace t = metric::MetricSpace::tree({-1, 0, 1}, {0, 2, 3});
  TreePoint a = TreePoint::at_vertex(0);
  TreePoint b = TreePoint::at_vertex(2);
  CHECK(kserver::tree_distance(t, a, b) == 5);
  TreePoint mid = kserver::tree_move(t, a, b, 3);
  CHECK_FALSE(mid.is_vertex());
  CHECK(mid.edge_child == 2);
  CHECK(mid.offset == doctest::Approx(1));
  CHECK(kserver::tree_distance(t, mid, b) == doctest::Approx(2));
  CHECK(kserver::tree_move(t, a, b, 99) == b);  // capped at the target
  CHECK(kserver::tree_move(t, a, b, 0) == a);
}

TEST_CASE("tree offline optimum matches the line equivalent") {
  metric::MetricSpace t = metric::MetricSpace::tree({-1, 0, 1}, {0, 2, 3});
  CHECK(kserver::kserver_offline_opt_tree(t, {2, 0}, {0, 1}) == 3);
  CHECK(kserver::kserver_offline_opt_tree(t, {}, {0}) == 0);
  metric::MetricSpace line = metric::MetricSpace::line({0, 2, 5});
  CHECK_THROWS_AS(kserver::kserver_offline_opt_tree(line, {0}, {0}), input_error);
}

TEST_CASE("tree lazy serve agrees with its hypothetical query") {
  metric::MetricSpace t = metric::MetricSpace::tree({-1, 0, 0, 1, 1}, {0, 2, 3, 1, 4});
  kserver::TreePair pair{
      kserver::TreeConfig({TreePoint::at_vertex(2), TreePoint::at_vertex(4)}),
      kserver::TreeConfig({TreePoint::at_vertex(2), TreePoint::at_vertex(4)})};
  int predicted = kserver::lazy_owner_tree(t, pair, TreePoint::at_vertex(3));
  kserver::LazyResult res = kserver::lazy_step_tree(t, pair, TreePoint::at_vertex(3));
  CHECK(res.served == predicted);
  CHECK(pair.real.pos[static_cast<std::size_t>(predicted)] == TreePoint::at_vertex(3));
}

}  // TEST_SUITE
