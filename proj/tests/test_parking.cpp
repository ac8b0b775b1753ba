#include "doctest.h"

#include <cmath>
#include <vector>

#include "parking.hpp"
#include "rng.hpp"

using namespace opp;
using parking::ParkingInstance;

TEST_SUITE("parking") {

TEST_CASE("blocks enumerate occupied runs with their boundary vacants") {
  parking::BlockStructure bs = parking::blocks({0, 1, 3, 6, 7, 9}, {0, 1, 1, 0, 1, 0});
  REQUIRE(bs.blocks.size() == 2);
  CHECK(bs.blocks[0].left_vacant == 0);
  CHECK(bs.blocks[0].right_vacant == 3);
  CHECK(bs.blocks[0].first_occ == 1);
  CHECK(bs.blocks[0].last_occ == 2);
  CHECK(bs.blocks[0].d == 6);
  CHECK(bs.blocks[1].left_vacant == 3);
  CHECK(bs.blocks[1].right_vacant == 5);
  CHECK(bs.blocks[1].d == 3);
  CHECK(bs.vacant_slots == std::vector<int>({0, 3, 5}));

  CHECK(parking::blocks({0, 1}, {0, 0}).blocks.empty());
  CHECK_THROWS_AS(parking::blocks({0, 1, 2}, {1, 0, 0}), unsupported_error);
  CHECK_THROWS_AS(parking::blocks({0, 1, 2}, {0, 0, 1}), unsupported_error);
  CHECK_THROWS_AS(parking::blocks({0, 1}, {0, 1, 1}), input_error);  // length mismatch
}

TEST_CASE("greedy parks at the nearest vacant slot") {
  std::vector<double> slots = {0, 1, 2, 4, 8};
  std::vector<char> occ = {0, 0, 0, 0, 0};
  // the cascade: every car pushes the next one a power of two further
  CHECK(parking::greedy_step(slots, occ, 1.0).slot == 1);
  parking::ParkResult r2 = parking::greedy_step(slots, occ, 1.01);
  CHECK(r2.slot == 2);
  CHECK(r2.cost == doctest::Approx(0.99));
  parking::ParkResult r3 = parking::greedy_step(slots, occ, 2.01);
  CHECK(r3.slot == 3);
  CHECK(r3.cost == doctest::Approx(1.99));
  parking::ParkResult r4 = parking::greedy_step(slots, occ, 4.01);
  CHECK(r4.slot == 4);
  CHECK(r4.cost == doctest::Approx(3.99));
  CHECK(occ == std::vector<char>({0, 1, 1, 1, 1}));

  SUBCASE("distance ties go right") {
    std::vector<char> o2 = {0, 1, 0};
    CHECK(parking::greedy_step({0, 2, 4}, o2, 2.0).slot == 2);
  }
  SUBCASE("a full lot is a capacity error") {
    std::vector<char> full = {1, 1, 1, 1, 1};
    CHECK_THROWS_AS(parking::greedy_step(slots, full, 1.0), capacity_error);
  }
}

TEST_CASE("harmonic step distinguishes forced and free choices") {
  Rng rng(7);
  std::vector<char> occ = {0, 1, 1};
  parking::ParkResult res = parking::harmonic_step({0, 2, 4}, occ, 4.0, rng);
  CHECK(res.slot == 0);  // only vacancy is on the left
  CHECK(res.cost == 4);

  std::vector<char> occ2 = {0, 1, 0};
  parking::ParkResult res2 = parking::harmonic_step({0, 2, 4}, occ2, 4.0, rng);
  CHECK(res2.slot == 2);  // the goal slot itself is vacant
  CHECK(res2.cost == 0);

  std::vector<char> full = {1, 1, 1};
  CHECK_THROWS_AS(parking::harmonic_step({0, 2, 4}, full, 1.0, rng), capacity_error);
}

TEST_CASE("price constructions share the block equalities") {
  // one block: vacants at 0 and 2, one occupied slot between
  std::vector<double> lean = parking::min_sum_prices({0, 1, 2}, {0, 1, 0}, {1.0});
  CHECK(lean[0] == 1);
  CHECK(lean[2] == 0);
  CHECK(lean[1] == std::numeric_limits<double>::infinity());

  std::vector<double> direct = parking::observation_prices({0, 1, 2}, {0, 1, 0}, {1.0});
  CHECK(direct[0] == 1);
  CHECK(direct[2] == 0);

  // a negative offset flips which side is free
  std::vector<double> neg = parking::min_sum_prices({0, 1, 2}, {0, 1, 0}, {-0.5});
  CHECK(neg[0] == 0);
  CHECK(neg[2] == doctest::Approx(0.5));

  CHECK_THROWS_AS(parking::min_sum_prices({0, 1, 2}, {0, 1, 0}, {1.0, 2.0}), input_error);
}

TEST_CASE("monotone distribution reproduces the hand table") {
  parking::MonotoneCdf cdf = parking::monotone_cdf({-6, 4}, {0.8, 0.3}, 10.0, 0.0);
  REQUIRE(cdf.z.size() == 3);
  CHECK(cdf.z[0] == doctest::Approx(-8).epsilon(1e-12));
  CHECK(cdf.z[1] == doctest::Approx(-1).epsilon(1e-12));
  CHECK(cdf.z[2] == doctest::Approx(7).epsilon(1e-12));
  CHECK(cdf.mass[0] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(cdf.mass[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(cdf.mass[2] == doctest::Approx(0.3).epsilon(1e-12));

  CHECK_THROWS_AS(parking::monotone_cdf({-2, 2}, {0.3, 0.8}, 10, 0), input_error);
  CHECK_THROWS_AS(parking::monotone_cdf({2, -2}, {0.8, 0.3}, 10, 0), input_error);
  CHECK_THROWS_AS(parking::monotone_cdf({-20, 2}, {0.8, 0.3}, 10, 0), input_error);
  CHECK_THROWS_AS(parking::monotone_cdf({-2}, {1.5}, 10, 0), input_error);
}

TEST_CASE("cascade family hand values") {
  ParkingInstance inst = parking::adversarial_instance(4, 0.01);
  CHECK(inst.slots == std::vector<double>({0, 1, 2, 4, 8}));
  CHECK(inst.occupied == std::vector<char>({0, 0, 0, 0, 0}));
  REQUIRE(inst.goals.size() == 4);
  CHECK(inst.goals[0] == 1.0);
  CHECK(inst.goals[1] == doctest::Approx(1.01).epsilon(1e-12));
  CHECK(inst.goals[3] == doctest::Approx(4.01).epsilon(1e-12));
  CHECK(parking::matching_offline_opt(inst.slots, inst.occupied, inst.goals) ==
        doctest::Approx(1.03).epsilon(1e-12));
  CHECK_THROWS_AS(parking::adversarial_instance(0, 0.1), input_error);
}

TEST_CASE("gap rewrite cuts long edges and floors short ones") {
  ParkingInstance inst;
  inst.slots = {0, 1, 151, 152};
  inst.occupied = {0, 0, 0, 0};
  inst.goals = {1, 151, 152, 0};  // four cars, so the floor uses n = 4
  parking::TransformResult tr = parking::transform_metric(inst, 100, 2.0);
  CHECK(tr.floor_gap == doctest::Approx(100.0 / 64).epsilon(1e-12));  // z / (2 c n^2)
  REQUIRE(tr.components.size() == 2);
  CHECK(tr.components[0].slots[1] - tr.components[0].slots[0] == doctest::Approx(1.5625));
  CHECK(tr.components[1].slots[1] - tr.components[1].slots[0] == doctest::Approx(1.5625));
  CHECK(tr.components[0].goals.size() == 2);
  CHECK(tr.components[1].goals.size() == 2);
  CHECK(tr.slot_component == std::vector<int>({0, 0, 1, 1}));

  ParkingInstance bad = inst;
  bad.goals = {75.0};
  CHECK_THROWS_AS(parking::transform_metric(bad, 100, 2.0), input_error);
  CHECK_THROWS_AS(parking::transform_metric(inst, 0.0, 2.0), input_error);
  CHECK_THROWS_AS(parking::transform_metric(inst, 100, 1.0), input_error);
}

TEST_CASE("offline optimum is an assignment over vacant slots") {
  CHECK(parking::matching_offline_opt({0, 2, 4}, {0, 1, 0}, {2, 2}) == 4);
  CHECK(parking::matching_offline_opt({0, 2, 4}, {0, 0, 0}, {}) == 0);
  CHECK_THROWS_AS(parking::matching_offline_opt({0, 2}, {1, 1}, {1.0}), capacity_error);
}

TEST_CASE("margin scales with the smallest gap") {
  CHECK(parking::strict_margin({0, 2, 6}) == 2e-9);
  CHECK(parking::strict_margin({0, 0.5, 20}) == 0.5e-9);
}

}  // TEST_SUITE
