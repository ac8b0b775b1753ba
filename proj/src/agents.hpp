#pragma once

#include <functional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"

namespace opp::agents {

// How an agent picks among options whose disutilities tie at the minimum.
enum class TiePolicy { first, last, uniform, adversarial };

TiePolicy tie_policy_from_name(const std::string& name);
std::string tie_policy_name(TiePolicy policy);

// Callback deciding adversarial ties; receives the tied option indices.
using TieBreaker = std::function<int(const std::vector<int>&)>;

struct Decision {
  int choice = -1;
  double value = 0;
  std::vector<int> tied;  // every index within tolerance of the minimum
};

// Argmin with relative tolerance 1e-9. `rng` is required for the uniform
// policy, `breaker` for the adversarial one.
Decision decide(const std::vector<double>& options, TiePolicy policy, Rng* rng = nullptr,
                const TieBreaker& breaker = {});

struct TraceStep {
  int step = 0;
  int choice = -1;
  double value = 0;
  double cost = 0;  // realized cost of the move, not the priced disutility
};

struct Trace {
  std::vector<TraceStep> steps;
  double total_cost = 0;

  void add(int choice, double value, double cost);
};

struct PoaSummary {
  double max_ratio = 0;
  double mean_ratio = 0;
  int trials = 0;
};

// Ratio statistics over paired (cost, opt) trials. A zero optimum yields
// ratio 1 when the cost is zero too, infinity otherwise.
PoaSummary empirical_poa(const std::vector<double>& costs, const std::vector<double>& opts);

}  // namespace opp::agents
