#include "agents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace opp::agents {

TiePolicy tie_policy_from_name(const std::string& name) {
  if (name == "first") return TiePolicy::first;
  if (name == "last") return TiePolicy::last;
  if (name == "uniform") return TiePolicy::uniform;
  if (name == "adversarial") return TiePolicy::adversarial;
  throw config_error("unknown tie policy: " + name);
}

std::string tie_policy_name(TiePolicy policy) {
  switch (policy) {
    case TiePolicy::first: return "first";
    case TiePolicy::last: return "last";
    case TiePolicy::uniform: return "uniform";
    case TiePolicy::adversarial: return "adversarial";
  }
  throw internal_error("tie_policy_name: bad enum");
}

Decision decide(const std::vector<double>& options, TiePolicy policy, Rng* rng,
                const TieBreaker& breaker) {
  if (options.empty()) throw input_error("decide: no options");
  double mn = options[0];
  for (double o : options) {
    if (!(o == o)) throw input_error("decide: NaN option");
    mn = std::min(mn, o);
  }
  if (mn == std::numeric_limits<double>::infinity())
    throw input_error("decide: every option is infeasible");
  Decision d;
  d.value = mn;
  double tol = 1e-9 * (1 + std::abs(mn));
  for (int i = 0; i < static_cast<int>(options.size()); ++i)
    if (options[i] <= mn + tol) d.tied.push_back(i);
  switch (policy) {
    case TiePolicy::first:
      d.choice = d.tied.front();
      break;
    case TiePolicy::last:
      d.choice = d.tied.back();
      break;
    case TiePolicy::uniform:
      if (!rng) throw input_error("decide: uniform policy needs an rng");
      d.choice = d.tied[rng->index(d.tied.size())];
      break;
    case TiePolicy::adversarial: {
      if (!breaker) throw input_error("decide: adversarial policy needs a callback");
      int c = breaker(d.tied);
      if (std::find(d.tied.begin(), d.tied.end(), c) == d.tied.end())
        throw input_error("decide: adversarial callback picked an untied option");
      d.choice = c;
      break;
    }
  }
  return d;
}

void Trace::add(int choice, double value, double cost) {
  TraceStep s;
  s.step = static_cast<int>(steps.size());
  s.choice = choice;
  s.value = value;
  s.cost = cost;
  steps.push_back(s);
  total_cost += cost;
}

PoaSummary empirical_poa(const std::vector<double>& costs, const std::vector<double>& opts) {
  if (costs.size() != opts.size() || costs.empty())
    throw input_error("empirical_poa: paired non-empty vectors required");
  PoaSummary s;
  s.trials = static_cast<int>(costs.size());
  double sum = 0;
  for (size_t i = 0; i < costs.size(); ++i) {
    double ratio;
    if (opts[i] == 0)
      ratio = (costs[i] == 0) ? 1.0 : std::numeric_limits<double>::infinity();
    else
      ratio = costs[i] / opts[i];
    s.max_ratio = std::max(s.max_ratio, ratio);
    sum += ratio;
  }
  s.mean_ratio = sum / s.trials;
  return s;
}

}  // namespace opp::agents
