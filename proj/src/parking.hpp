#pragma once

#include <vector>

#include "errors.hpp"
#include "rng.hpp"

namespace opp::parking {

// Slots on a line with an initial occupancy mask. Goals are coordinates in
// arrival order; generated instances place them on vertices, synthetic
// lower-bound instances may not.
struct ParkingInstance {
  std::vector<double> slots;
  std::vector<char> occupied;
  std::vector<double> goals;

  void validate() const;
  int num_vacant() const;
};

// Maximal run of occupied slots enclosed by two vacant ones.
struct Block {
  int left_vacant = -1;
  int right_vacant = -1;
  int first_occ = -1;
  int last_occ = -1;
  double d = 0;  // distance between the boundary vacants
};

struct BlockStructure {
  std::vector<Block> blocks;
  std::vector<int> vacant_slots;
};

// Occupied slots before the first vacant or after the last are rejected:
// such a run has no boundary pair.
BlockStructure blocks(const std::vector<double>& slots, const std::vector<char>& occupied);

struct ParkResult {
  int slot = -1;
  double cost = 0;
};

// Nearest vacant slot, ties broken rightward. Marks the slot occupied.
ParkResult greedy_step(const std::vector<double>& slots, std::vector<char>& occupied, double goal);

// Harmonic rule: a car whose goal is taken parks at the nearest vacant slot
// on the left with probability d_right / (d_left + d_right), else right.
ParkResult harmonic_step(const std::vector<double>& slots, std::vector<char>& occupied, double goal,
                         Rng& rng);

// Margin keeping the strict inequalities of the price conditions away from
// rounding: 1e-9 times the smallest positive slot gap.
double strict_margin(const std::vector<double>& slots);

// One price offset per block, uniform on (-d_j, d_j) with the strict margin.
std::vector<double> sample_block_offsets(const BlockStructure& bs, double margin, Rng& rng);

// Direct construction: price of a vacant slot is the sum of the offsets of
// all blocks lying to its right, shifted so the minimum is zero. Occupied
// slots price at infinity.
std::vector<double> observation_prices(const std::vector<double>& slots,
                                       const std::vector<char>& occupied,
                                       const std::vector<double>& offsets);

// Minimum-sum prices subject to the same offset equalities, the strict
// adjacent-difference bounds and nonnegativity. Solved as a difference
// constraint system by lower-bound propagation.
std::vector<double> min_sum_prices(const std::vector<double>& slots,
                                   const std::vector<char>& occupied,
                                   const std::vector<double>& offsets);

// Sampled offsets fed through observation_prices.
std::vector<double> harmonic_prices(const std::vector<double>& slots,
                                    const std::vector<char>& occupied, Rng& rng);

// Discrete distribution of the right-minus-left price difference realizing
// prescribed left-parking probabilities for the occupied vertices of one
// block. `deltas` are d(v,L) - d(v,R) per occupied vertex (increasing),
// `p_left` the desired probabilities (non-increasing).
struct MonotoneCdf {
  std::vector<double> z;
  std::vector<double> mass;
};

MonotoneCdf monotone_cdf(const std::vector<double>& deltas, const std::vector<double>& p_left,
                         double d, double margin);
double sample_cdf(const MonotoneCdf& cdf, Rng& rng);

// Prices drawn from the per-block distributions that realize the harmonic
// left probabilities; offsets enter with the mirrored orientation (blocks to
// the left of a slot contribute), which preserves the marginals while
// keeping prices monotone under arrivals.
std::vector<double> monotone_prices(const std::vector<double>& slots,
                                    const std::vector<char>& occupied, Rng& rng);

// Bounded-aspect rewrite of the slot line: gaps of at least `z` are cut,
// gaps below z / (2 c n^2) are raised to that floor. Goals are carried into
// their component by linear position within the surrounding gap.
struct TransformResult {
  std::vector<ParkingInstance> components;
  std::vector<int> slot_component;
  std::vector<int> slot_index;
  std::vector<int> goal_component;
  double floor_gap = 0;
  double cut = 0;
};

TransformResult transform_metric(const ParkingInstance& instance, double z, double c);

// Lower-bound family: slots at 0 and the powers of two up to 2^(n-1), goals
// hugging the previous car's spot from the right.
ParkingInstance adversarial_instance(int n, double eps);

// Exact optimum: minimum-cost assignment of goals to vacant slots.
double matching_offline_opt(const std::vector<double>& slots, const std::vector<char>& occupied,
                            const std::vector<double>& goals);

}  // namespace opp::parking
