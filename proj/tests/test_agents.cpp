#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "agents.hpp"
#include "rng.hpp"

using namespace opp;
using agents::decide;
using agents::TiePolicy;

TEST_SUITE("agents") {

TEST_CASE("decide picks the argmin and reports ties") {
  agents::Decision d = decide({3.0, 1.0, 2.0}, TiePolicy::first);
  CHECK(d.choice == 1);
  CHECK(d.value == 1.0);
  CHECK(d.tied == std::vector<int>({1}));

  agents::Decision tie = decide({2.0, 1.0, 1.0}, TiePolicy::first);
  CHECK(tie.choice == 1);
  CHECK(tie.tied == std::vector<int>({1, 2}));
  CHECK(decide({2.0, 1.0, 1.0}, TiePolicy::last).choice == 2);

  // relative tolerance: 1e-12 apart ties, 1e-4 apart does not
  agents::Decision close = decide({1.0, 1.0 + 1e-12}, TiePolicy::last);
  CHECK(close.tied.size() == 2);
  CHECK(close.choice == 1);
  CHECK(decide({1.0, 1.0 + 1e-4}, TiePolicy::last).choice == 0);
}

TEST_CASE("uniform policy needs an rng and stays within the tie set") {
  CHECK_THROWS_AS(decide({1.0, 1.0}, TiePolicy::uniform), input_error);
  Rng rng(11);
  int seen0 = 0, seen1 = 0;
  for (int i = 0; i < 200; ++i) {
    agents::Decision d = decide({1.0, 1.0, 5.0}, TiePolicy::uniform, &rng);
    REQUIRE((d.choice == 0 || d.choice == 1));
    (d.choice == 0 ? seen0 : seen1)++;
  }
  CHECK(seen0 > 50);
  CHECK(seen1 > 50);
}

TEST_CASE("adversarial policy defers to the callback") {
  CHECK_THROWS_AS(decide({1.0, 1.0}, TiePolicy::adversarial), input_error);
  agents::TieBreaker pick_last = [](const std::vector<int>& tied) { return tied.back(); };
  CHECK(decide({1.0, 2.0, 1.0}, TiePolicy::adversarial, nullptr, pick_last).choice == 2);
  agents::TieBreaker bad = [](const std::vector<int>&) { return 7; };
  CHECK_THROWS_AS(decide({1.0, 1.0}, TiePolicy::adversarial, nullptr, bad), input_error);
}

TEST_CASE("degenerate option lists are rejected") {
  CHECK_THROWS_AS(decide({}, TiePolicy::first), input_error);
  double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(decide({inf, inf}, TiePolicy::first), input_error);
  CHECK_THROWS_AS(decide({1.0, std::nan("")}, TiePolicy::first), input_error);
  // a finite option next to an infinite one is fine
  CHECK(decide({inf, 3.0}, TiePolicy::first).choice == 1);
}

TEST_CASE("policy names round-trip") {
  for (auto p : {TiePolicy::first, TiePolicy::last, TiePolicy::uniform, TiePolicy::adversarial})
    CHECK(agents::tie_policy_from_name(agents::tie_policy_name(p)) == p);
  CHECK_THROWS_AS(agents::tie_policy_from_name("random"), config_error);
}

TEST_CASE("trace accumulates realized cost only") {
  agents::Trace tr;
  tr.add(0, 1.5, 2.0);
  tr.add(1, 0.5, 3.0);
  REQUIRE(tr.steps.size() == 2);
  CHECK(tr.steps[0].step == 0);
  CHECK(tr.steps[1].step == 1);
  CHECK(tr.steps[1].choice == 1);
  CHECK(tr.steps[1].value == 0.5);
  CHECK(tr.total_cost == 5.0);
}

TEST_CASE("poa summary follows the zero-optimum conventions") {
  agents::PoaSummary s = agents::empirical_poa({4.0, 6.0}, {2.0, 2.0});
  CHECK(s.trials == 2);
  CHECK(s.max_ratio == 3.0);
  CHECK(s.mean_ratio == doctest::Approx(2.5));

  agents::PoaSummary z = agents::empirical_poa({0.0, 1.0}, {0.0, 0.0});
  CHECK(z.max_ratio == std::numeric_limits<double>::infinity());
  CHECK(std::isinf(z.mean_ratio));

  agents::PoaSummary both = agents::empirical_poa({0.0}, {0.0});
  CHECK(both.max_ratio == 1.0);
  CHECK(both.mean_ratio == 1.0);

  CHECK_THROWS_AS(agents::empirical_poa({1.0}, {1.0, 2.0}), input_error);
}

}  // TEST_SUITE
