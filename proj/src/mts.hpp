#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

#include "errors.hpp"
#include "metric.hpp"

namespace opp::mts {

// Periodic traversal position arithmetic plus the fractional traversal
// state (position j, residual work rho). Templated on the scalar so the
// worked-example test can run it on exact rationals.
template <class R>
class TraversalCursor {
 public:
  TraversalCursor(std::vector<int> period, std::function<R(int, int)> dist)
      : period_(std::move(period)), dist_(std::move(dist)) {
    if (period_.empty()) throw input_error("traversal: empty period");
    prefix_.push_back(R(0));
  }

  struct Fraction {
    std::int64_t index;  // 1-based position in tau
    R lambda;            // fraction of the task processed there
    R work;              // lambda * w
  };

  int state_at(std::int64_t j) const {
    return period_[static_cast<std::size_t>((j - 1) % static_cast<std::int64_t>(period_.size()))];
  }

  void materialize(std::int64_t upto) {
    while (static_cast<std::int64_t>(prefix_.size()) < upto)
      prefix_.push_back(prefix_.back() + gap(static_cast<std::int64_t>(prefix_.size())));
  }

  // delta(l, l2): summed step distances between two materialized positions.
  R delta(std::int64_t l, std::int64_t l2) {
    std::int64_t lo = std::min(l, l2), hi = std::max(l, l2);
    if (lo < 1) throw input_error("traversal: index out of range");
    materialize(hi);
    return prefix_[hi - 1] - prefix_[lo - 1];
  }

  // Processes one task per the fractional rule: work at position j until
  // the accumulated rho fills the gap to the next position, then advance.
  std::vector<Fraction> step(const std::vector<R>& w) {
    std::vector<Fraction> fractions;
    R done(0), one(1);
    while (done < one) {
      R g = gap(j_);
      R w_here = w.at(static_cast<std::size_t>(state_at(j_)));
      R rem = one - done;
      if (!(R(0) < g)) {
        // Single-state system: the whole task is absorbed in place.
        total_work_ += rem * w_here;
        fractions.push_back({j_, rem, rem * w_here});
        break;
      }
      R avail = g - rho_;
      if (w_here == R(0)) {
        fractions.push_back({j_, rem, R(0)});
        break;
      }
      if (avail < rem * w_here) {
        fractions.push_back({j_, avail / w_here, avail});
        total_work_ += avail;
        done = done + avail / w_here;
        rho_ = R(0);
        ++j_;
      } else {
        R wk = rem * w_here;
        fractions.push_back({j_, rem, wk});
        total_work_ += wk;
        rho_ = rho_ + wk;
        if (filled(rho_, g)) {
          rho_ = R(0);
          ++j_;
        }
        break;
      }
    }
    checkpoints_.push_back(j_);
    return fractions;
  }

  std::int64_t position() const { return j_; }
  R residual() const { return rho_; }
  R total_work() const { return total_work_; }
  const std::vector<std::int64_t>& checkpoints() const { return checkpoints_; }

  // m(s): first position >= jmin whose state is s.
  std::int64_t first_occurrence(std::int64_t jmin, int s) {
    std::int64_t p = static_cast<std::int64_t>(period_.size());
    for (std::int64_t j = jmin; j < jmin + p; ++j)
      if (state_at(j) == s) return j;
    throw input_error("traversal: state missing from period");
  }

 private:
  R gap(std::int64_t j) { return dist_(state_at(j), state_at(j + 1)); }

  static bool filled(double rho, double g) { return rho >= g - 1e-12 * (1 + g); }
  template <class Q>
  static bool filled(const Q& rho, const Q& g) {
    return !(rho < g);
  }

  std::vector<int> period_;
  std::function<R(int, int)> dist_;
  std::vector<R> prefix_;
  std::int64_t j_ = 1;
  R rho_{0};
  R total_work_{0};
  std::vector<std::int64_t> checkpoints_{1};
};

// States 0..m-1 with a validated metric, an initial state, and one traversal
// period. Multi-state systems need consecutive period entries (cyclically)
// at positive distance, and every state present in the period.
struct TaskSystem {
  metric::MetricSpace d;
  int s0;
  std::vector<int> period;

  TaskSystem(metric::MetricSpace d_in, int s0_in, std::vector<int> period_in);
  int states() const { return d.size(); }
  TraversalCursor<double> cursor() const {
    return TraversalCursor<double>(period, [this](int a, int b) { return d.distance(a, b); });
  }
};

// One period = doubled depth-first tour of a minimum spanning tree, rooted
// at s0 (final return edge closes the cycle across period boundaries).
std::vector<int> default_traversal(const metric::MetricSpace& d, int s0);

// Orderings of (ell_{i-1}, t_{i-1}, ell_i, t_i) distinguished by the
// approximation proof; labels 1..9.
int follow_case_label(std::int64_t ell_prev, std::int64_t t_prev, std::int64_t ell,
                      std::int64_t t);

// Follow-the-traversal: jumps to the cheapest first occurrence at or beyond
// min(ell, t), treating positions in [jmin, jmax] as reachable for free.
class FollowState {
 public:
  explicit FollowState(const TaskSystem& sys);

  struct Candidate {
    int state;
    std::int64_t index;  // m(state)
    double cost;         // c-tilde at that index
  };
  std::vector<Candidate> candidates(const std::vector<double>& w);

  struct StepResult {
    std::int64_t ell;
    std::int64_t t;
    int case_label;
    double step_cost;  // direct-edge transition + processing at the target
  };
  StepResult step(const std::vector<double>& w);

  std::int64_t ell() const { return ell_; }
  std::int64_t t() const { return cursor_.position(); }
  double follow_cost() const { return follow_cost_; }
  // Traversal algorithm cost so far: transitions + processing work.
  double traversal_cost() { return cursor_.delta(1, t()) + cursor_.total_work(); }
  TraversalCursor<double>& cursor() { return cursor_; }

 private:
  const TaskSystem* sys_;
  TraversalCursor<double> cursor_;
  std::int64_t ell_ = 1;
  double follow_cost_ = 0;
};

// Observed agent decision: chosen state and the work done there.
struct MtsObservation {
  int state;
  double work;
};

// Posted prices that reproduce follow-the-traversal decisions, maintained
// from observations only. Prices are shifted so the minimum is zero.
class PricingScheme {
 public:
  explicit PricingScheme(const TaskSystem& sys);

  std::vector<double> prices(int prev_state);

  struct ObserveResult {
    std::vector<double> imaginary;        // reconstructed task vector
    std::vector<FollowState::Candidate> candidates;  // c-tilde under it
    std::int64_t chosen_index;            // m(observed state)
  };
  ObserveResult observe(const MtsObservation& obs, int prev_state);

  std::int64_t ell() const { return ell_; }
  std::int64_t t() const { return cursor_.position(); }

 private:
  std::int64_t jmin() const { return std::min(ell_, cursor_.position()); }
  std::int64_t jmax() const { return std::max(ell_, cursor_.position()); }

  const TaskSystem* sys_;
  TraversalCursor<double> cursor_;
  std::int64_t ell_ = 1;
};

// Smallest imaginary task consistent with the observation under the prices.
std::vector<double> imaginary_task(const MtsObservation& obs, const std::vector<double>& prices,
                                   int prev_state, const metric::MetricSpace& d);

// Agent disutility per state: work + transition + posted price.
std::vector<double> mts_agent_options(const std::vector<double>& prices, int prev_state,
                                      const std::vector<double>& task,
                                      const metric::MetricSpace& d);

// Exact offline optimum by DP over (task, state).
double mts_offline_opt(const std::vector<std::vector<double>>& tasks,
                       const metric::MetricSpace& d, int s0);

}  // namespace opp::mts
