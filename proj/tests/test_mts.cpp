#include "doctest.h"

#include <cmath>
#include <vector>

#include "metric.hpp"
#include "mts.hpp"
#include "rational.hpp"

using namespace opp;
using opp::Rational;

namespace {

metric::MetricSpace walkthrough_space() {
  return metric::MetricSpace::matrix({{0, 2, 3}, {2, 0, 4}, {3, 4, 0}});
}

mts::TraversalCursor<Rational> walkthrough_cursor() {
  auto d = walkthrough_space();
  return mts::TraversalCursor<Rational>(
      {0, 1, 0, 2}, [d](int a, int b) { return Rational(static_cast<std::int64_t>(d.distance(a, b))); });
}

}  // namespace

TEST_SUITE("mts") {

TEST_CASE("fractional traversal replays the walkthrough exactly") {
  auto cursor = walkthrough_cursor();

  auto f1 = cursor.step({Rational(3), Rational(6), Rational(3)});
  REQUIRE(f1.size() == 2);
  CHECK(f1[0].index == 1);
  CHECK(f1[0].lambda == Rational(2, 3));
  CHECK(f1[0].work == Rational(2));
  CHECK(f1[1].index == 2);
  CHECK(f1[1].lambda == Rational(1, 3));
  CHECK(f1[1].work == Rational(2));
  CHECK(cursor.position() == 3);
  CHECK(cursor.residual() == Rational(0));

  auto f2 = cursor.step({Rational(1), Rational(3), Rational(4)});
  REQUIRE(f2.size() == 1);
  CHECK(f2[0].index == 3);
  CHECK(f2[0].lambda == Rational(1));
  CHECK(f2[0].work == Rational(1));
  CHECK(cursor.residual() == Rational(1));

  auto f3 = cursor.step({Rational(10), Rational(10), Rational(10)});
  REQUIRE(f3.size() == 5);
  const Rational lambdas[5] = {{2, 10}, {3, 10}, {2, 10}, {2, 10}, {1, 10}};
  const std::int64_t indices[5] = {3, 4, 5, 6, 7};
  for (int i = 0; i < 5; ++i) {
    CHECK(f3[i].index == indices[i]);
    CHECK(f3[i].lambda == lambdas[i]);
    CHECK(f3[i].work == lambdas[i] * Rational(10));
  }
  CHECK(cursor.position() == 7);
  CHECK(cursor.residual() == Rational(1));
  CHECK(cursor.total_work() == Rational(15));
  // distance walked plus leftover work equals the work done
  CHECK(cursor.delta(1, 7) + cursor.residual() == cursor.total_work());
}

TEST_CASE("default traversal doubles the spanning tree") {
  CHECK(mts::default_traversal(walkthrough_space(), 0) == std::vector<int>({0, 1, 0, 2}));
  metric::MetricSpace two = metric::MetricSpace::matrix({{0, 5}, {5, 0}});
  CHECK(mts::default_traversal(two, 1) == std::vector<int>({1, 0}));
  metric::MetricSpace one = metric::MetricSpace::matrix({{0}});
  CHECK(mts::default_traversal(one, 0) == std::vector<int>({0}));
}

TEST_CASE("first-task candidates and the follow step") {
  mts::TaskSystem sys(walkthrough_space(), 0, {0, 1, 0, 2});
  mts::FollowState follow(sys);
  auto cands = follow.candidates({3, 6, 3});
  REQUIRE(cands.size() == 3);
  for (const auto& c : cands) {
    if (c.state == 0) { CHECK(c.index == 1); CHECK(c.cost == doctest::Approx(3)); }
    if (c.state == 1) { CHECK(c.index == 2); CHECK(c.cost == doctest::Approx(8)); }
    if (c.state == 2) { CHECK(c.index == 4); CHECK(c.cost == doctest::Approx(10)); }
  }
  auto step = follow.step({3, 6, 3});
  CHECK(step.ell == 1);
  CHECK(step.case_label >= 1);
  CHECK(step.case_label <= 9);
  CHECK(follow.follow_cost() == doctest::Approx(3));
}

TEST_CASE("initial prices and free-agent disutilities") {
  mts::TaskSystem sys(walkthrough_space(), 0, {0, 1, 0, 2});
  mts::PricingScheme scheme(sys);
  std::vector<double> prices = scheme.prices(0);
  REQUIRE(prices.size() == 3);
  CHECK(prices[0] == doctest::Approx(0));
  CHECK(prices[1] == doctest::Approx(0));
  CHECK(prices[2] == doctest::Approx(4));

  std::vector<double> options =
      mts::mts_agent_options({0, 0, 0}, 0, {3, 6, 3}, sys.d);
  CHECK(options[0] == doctest::Approx(3));
  CHECK(options[1] == doctest::Approx(8));
  CHECK(options[2] == doctest::Approx(6));
}

TEST_CASE("observation feeds the simulated traversal") {
  mts::TaskSystem sys(walkthrough_space(), 0, {0, 1, 0, 2});
  mts::PricingScheme scheme(sys);
  std::vector<double> prices = scheme.prices(0);
  auto obs = scheme.observe({0, 3.0}, 0);
  // the observed coordinate is reconstructed exactly
  CHECK(obs.imaginary[0] == doctest::Approx(3).epsilon(1e-12));
  // all other coordinates stay consistent with the prices
  for (int s = 1; s < 3; ++s) CHECK(obs.imaginary[s] >= 0);
  CHECK(obs.chosen_index == 1);
  REQUIRE(obs.candidates.size() == 3);
}

TEST_CASE("imaginary task hand values") {
  metric::MetricSpace pair = metric::MetricSpace::matrix({{0, 1}, {1, 0}});
  std::vector<double> w = mts::imaginary_task({0, 2.0}, {0, 0}, 0, pair);
  CHECK(w[0] == doctest::Approx(2).epsilon(1e-12));
  CHECK(w[1] == doctest::Approx(1).epsilon(1e-12));
  w = mts::imaginary_task({0, 2.0}, {0, 100}, 0, pair);
  CHECK(w[1] == 0);  // a huge price clamps the other coordinate to zero
}

TEST_CASE("offline optimum by state DP") {
  metric::MetricSpace d = walkthrough_space();
  CHECK(mts::mts_offline_opt({{3, 6, 3}}, d, 0) == doctest::Approx(3));
  CHECK(mts::mts_offline_opt({{3, 6, 3}, {1, 3, 4}}, d, 0) == doctest::Approx(4));
  CHECK(mts::mts_offline_opt({}, d, 0) == 0);
}

TEST_CASE("task systems reject malformed periods") {
  metric::MetricSpace two = metric::MetricSpace::matrix({{0, 2}, {2, 0}});
  CHECK_THROWS_AS(mts::TaskSystem(two, 0, {0, 1, 1, 0}), input_error);  // repeated neighbour
  CHECK_THROWS_AS(mts::TaskSystem(two, 0, {0}), input_error);           // state 1 missing
  CHECK_THROWS_AS(mts::TaskSystem(two, 2, {0, 1}), input_error);    // bad start state
  CHECK_THROWS_AS(mts::TaskSystem(two, 0, {}), input_error);
}

TEST_CASE("case labels distinguish the interleavings") {
  // degenerate single-state system: positions coincide throughout
  CHECK(mts::follow_case_label(1, 1, 1, 1) >= 1);
  CHECK(mts::follow_case_label(1, 1, 1, 1) <= 9);
  // distinct inputs map to distinct orderings
  CHECK(mts::follow_case_label(1, 2, 3, 4) != mts::follow_case_label(4, 3, 2, 1));
}

}  // TEST_SUITE
