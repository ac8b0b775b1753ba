#include "mts.hpp"

#include <limits>

namespace opp::mts {

TaskSystem::TaskSystem(metric::MetricSpace d_in, int s0_in, std::vector<int> period_in)
    : d(std::move(d_in)), s0(s0_in), period(std::move(period_in)) {
  int m = d.size();
  if (s0 < 0 || s0 >= m) throw input_error("task system: bad initial state");
  if (period.empty()) throw input_error("task system: empty traversal period");
  std::vector<char> seen(m, 0);
  for (int s : period) {
    if (s < 0 || s >= m) throw input_error("task system: traversal state out of range");
    seen[s] = 1;
  }
  for (int s = 0; s < m; ++s)
    if (!seen[s]) throw input_error("task system: traversal period must visit every state");
  if (m > 1) {
    for (std::size_t i = 0; i < period.size(); ++i) {
      int a = period[i], b = period[(i + 1) % period.size()];
      if (a == b || d.distance(a, b) <= 0)
        throw input_error("task system: consecutive traversal states need positive distance");
    }
  }
}

std::vector<int> default_traversal(const metric::MetricSpace& d, int s0) {
  int m = d.size();
  if (s0 < 0 || s0 >= m) throw input_error("default_traversal: bad start state");
  if (m == 1) return {0};
  // Prim MST; ties resolved toward smaller vertex ids for reproducibility.
  std::vector<char> in_tree(m, 0);
  std::vector<double> best(m, std::numeric_limits<double>::infinity());
  std::vector<int> link(m, -1);
  std::vector<std::vector<int>> children(m);
  in_tree[s0] = 1;
  for (int v = 0; v < m; ++v)
    if (v != s0) {
      best[v] = d.distance(s0, v);
      link[v] = s0;
    }
  for (int added = 1; added < m; ++added) {
    int pick = -1;
    for (int v = 0; v < m; ++v) {
      if (in_tree[v]) continue;
      if (pick == -1 || best[v] < best[pick]) pick = v;
    }
    if (best[pick] <= 0)
      throw input_error("default_traversal: coincident states");
    in_tree[pick] = 1;
    children[link[pick]].push_back(pick);
    for (int v = 0; v < m; ++v) {
      if (in_tree[v]) continue;
      double w = d.distance(pick, v);
      if (w < best[v]) {
        best[v] = w;
        link[v] = pick;
      }
    }
  }
  // Doubled depth-first tour; the trailing return to s0 is implied by the
  // period wrap-around.
  std::vector<int> tour;
  std::vector<std::pair<int, std::size_t>> stack{{s0, 0}};
  tour.push_back(s0);
  while (!stack.empty()) {
    auto& [u, next_child] = stack.back();
    if (next_child < children[u].size()) {
      int v = children[u][next_child++];
      tour.push_back(v);
      stack.emplace_back(v, 0);
    } else {
      stack.pop_back();
      if (!stack.empty()) tour.push_back(stack.back().first);
    }
  }
  tour.pop_back();  // drop the final s0; wrap-around closes the cycle
  return tour;
}

int follow_case_label(std::int64_t lp, std::int64_t tp, std::int64_t l, std::int64_t t) {
  if (lp <= tp) {
    if (l <= tp) return 1;
    if (l <= t) return 2;
    return 3;
  }
  if (t <= l && l <= lp) return 4;
  if (t <= lp && lp < l) return 5;
  if (l < t && t <= lp) return 6;
  if (l < lp && lp < t) return 7;
  if (lp <= l && l < t) return 8;
  return 9;  // lp <= t && t <= l
}

FollowState::FollowState(const TaskSystem& sys) : sys_(&sys), cursor_(sys.cursor()) {}

std::vector<FollowState::Candidate> FollowState::candidates(const std::vector<double>& w) {
  if (static_cast<int>(w.size()) != sys_->states())
    throw input_error("follow: task length mismatch");
  std::int64_t jmin = std::min(ell_, cursor_.position());
  std::int64_t jmax = std::max(ell_, cursor_.position());
  std::vector<Candidate> out;
  for (int s = 0; s < sys_->states(); ++s) {
    std::int64_t j = cursor_.first_occurrence(jmin, s);
    double c = w[s];
    if (j > jmax) c += cursor_.delta(jmax, j);
    out.push_back({s, j, c});
  }
  return out;
}

FollowState::StepResult FollowState::step(const std::vector<double>& w) {
  auto cands = candidates(w);
  std::int64_t best_j = -1;
  double best_c = std::numeric_limits<double>::infinity();
  for (const auto& c : cands) {
    if (c.cost < best_c || (c.cost == best_c && c.index < best_j)) {
      best_c = c.cost;
      best_j = c.index;
    }
  }
  std::int64_t ell_prev = ell_;
  std::int64_t t_prev = cursor_.position();
  ell_ = best_j;
  int target = cursor_.state_at(ell_);
  double step_cost = sys_->d.distance(cursor_.state_at(ell_prev), target) + w[target];
  follow_cost_ += step_cost;
  cursor_.step(w);
  return {ell_, cursor_.position(), follow_case_label(ell_prev, t_prev, ell_, cursor_.position()),
          step_cost};
}

PricingScheme::PricingScheme(const TaskSystem& sys) : sys_(&sys), cursor_(sys.cursor()) {}

std::vector<double> PricingScheme::prices(int prev_state) {
  std::int64_t lo = jmin(), hi = jmax();
  int m = sys_->states();
  std::vector<double> p(m);
  for (int s = 0; s < m; ++s) {
    std::int64_t ms = cursor_.first_occurrence(lo, s);
    p[s] = -sys_->d.distance(prev_state, s);
    if (ms > hi) p[s] += cursor_.delta(hi, ms);
  }
  double shift = *std::min_element(p.begin(), p.end());
  for (double& x : p) x -= shift;
  return p;
}

PricingScheme::ObserveResult PricingScheme::observe(const MtsObservation& obs, int prev_state) {
  if (obs.state < 0 || obs.state >= sys_->states())
    throw input_error("observe: bad state");
  if (obs.work < 0) throw input_error("observe: negative work");
  std::vector<double> p = prices(prev_state);
  ObserveResult res;
  res.imaginary = imaginary_task(obs, p, prev_state, sys_->d);
  std::int64_t lo = jmin(), hi = jmax();
  for (int s = 0; s < sys_->states(); ++s) {
    std::int64_t j = cursor_.first_occurrence(lo, s);
    double c = res.imaginary[s];
    if (j > hi) c += cursor_.delta(hi, j);
    res.candidates.push_back({s, j, c});
  }
  res.chosen_index = cursor_.first_occurrence(lo, obs.state);
  ell_ = res.chosen_index;
  cursor_.step(res.imaginary);
  return res;
}

std::vector<double> imaginary_task(const MtsObservation& obs, const std::vector<double>& prices,
                                   int prev_state, const metric::MetricSpace& d) {
  int m = d.size();
  if (static_cast<int>(prices.size()) != m) throw input_error("imaginary_task: price length");
  double base = obs.work + d.distance(prev_state, obs.state) + prices[obs.state];
  std::vector<double> w(m);
  for (int j = 0; j < m; ++j)
    w[j] = std::max(0.0, base - d.distance(prev_state, j) - prices[j]);
  w[obs.state] = obs.work;  // exact, avoids cancellation dust
  return w;
}

std::vector<double> mts_agent_options(const std::vector<double>& prices, int prev_state,
                                      const std::vector<double>& task,
                                      const metric::MetricSpace& d) {
  int m = d.size();
  if (static_cast<int>(prices.size()) != m || static_cast<int>(task.size()) != m)
    throw input_error("agent options: length mismatch");
  std::vector<double> out(m);
  for (int s = 0; s < m; ++s) out[s] = task[s] + d.distance(prev_state, s) + prices[s];
  return out;
}

double mts_offline_opt(const std::vector<std::vector<double>>& tasks,
                       const metric::MetricSpace& d, int s0) {
  int m = d.size();
  if (s0 < 0 || s0 >= m) throw input_error("offline opt: bad initial state");
  std::vector<double> cost(m, std::numeric_limits<double>::infinity());
  cost[s0] = 0;
  for (const auto& w : tasks) {
    if (static_cast<int>(w.size()) != m) throw input_error("offline opt: task length mismatch");
    std::vector<double> next(m, std::numeric_limits<double>::infinity());
    for (int s = 0; s < m; ++s)
      for (int p = 0; p < m; ++p)
        next[s] = std::min(next[s], cost[p] + d.distance(p, s) + w[s]);
    cost = std::move(next);
  }
  return *std::min_element(cost.begin(), cost.end());
}

}  // namespace opp::mts
