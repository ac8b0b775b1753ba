#include "parking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "metric.hpp"

namespace opp::parking {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_slots(const std::vector<double>& slots, const std::vector<char>& occupied) {
  if (slots.empty()) throw input_error("parking: no slots");
  for (size_t i = 0; i + 1 < slots.size(); ++i)
    if (!(slots[i] < slots[i + 1])) throw input_error("parking: slots must be strictly increasing");
  if (occupied.size() != slots.size()) throw input_error("parking: occupancy mask size mismatch");
}

}  // namespace

void ParkingInstance::validate() const {
  check_slots(slots, occupied);
  if (static_cast<int>(goals.size()) > num_vacant())
    throw capacity_error("parking: more cars than vacant slots");
  for (double g : goals)
    if (!std::isfinite(g)) throw input_error("parking: non-finite goal");
}

int ParkingInstance::num_vacant() const {
  int n = 0;
  for (char o : occupied)
    if (!o) ++n;
  return n;
}

BlockStructure blocks(const std::vector<double>& slots, const std::vector<char>& occupied) {
  check_slots(slots, occupied);
  int m = static_cast<int>(slots.size());
  BlockStructure bs;
  for (int i = 0; i < m; ++i)
    if (!occupied[i]) bs.vacant_slots.push_back(i);
  if (bs.vacant_slots.empty()) throw input_error("blocks: no vacant slot");
  if (occupied[0] || occupied[m - 1])
    throw unsupported_error("blocks: occupied run touches an end slot");
  int i = 0;
  while (i < m) {
    if (!occupied[i]) {
      ++i;
      continue;
    }
    int first = i;
    while (i < m && occupied[i]) ++i;
    Block b;
    b.first_occ = first;
    b.last_occ = i - 1;
    b.left_vacant = first - 1;
    b.right_vacant = i;  // i < m because the last slot is vacant
    b.d = slots[b.right_vacant] - slots[b.left_vacant];
    bs.blocks.push_back(b);
  }
  return bs;
}

ParkResult greedy_step(const std::vector<double>& slots, std::vector<char>& occupied, double goal) {
  check_slots(slots, occupied);
  ParkResult out;
  for (int i = 0; i < static_cast<int>(slots.size()); ++i) {
    if (occupied[i]) continue;
    double d = std::abs(slots[i] - goal);
    if (out.slot < 0 || d < out.cost || (d == out.cost && slots[i] > slots[out.slot])) {
      out.slot = i;
      out.cost = d;
    }
  }
  if (out.slot < 0) throw capacity_error("greedy_step: no vacant slot");
  occupied[out.slot] = 1;
  return out;
}

ParkResult harmonic_step(const std::vector<double>& slots, std::vector<char>& occupied, double goal,
                         Rng& rng) {
  check_slots(slots, occupied);
  int m = static_cast<int>(slots.size());
  int left = -1, right = -1;
  for (int i = 0; i < m; ++i) {
    if (occupied[i]) continue;
    if (std::abs(slots[i] - goal) <= 1e-12 * (1 + std::abs(goal))) {
      occupied[i] = 1;
      return {i, std::abs(slots[i] - goal)};
    }
    if (slots[i] < goal) left = i;
    if (right < 0 && slots[i] > goal) right = i;
  }
  if (left < 0 && right < 0) throw capacity_error("harmonic_step: no vacant slot");
  int pick;
  if (left < 0)
    pick = right;
  else if (right < 0)
    pick = left;
  else {
    double dl = goal - slots[left], dr = slots[right] - goal;
    pick = (rng.uniform() < dr / (dl + dr)) ? left : right;
  }
  occupied[pick] = 1;
  return {pick, std::abs(slots[pick] - goal)};
}

double strict_margin(const std::vector<double>& slots) {
  if (slots.size() < 2) throw input_error("strict_margin: need at least two slots");
  double mn = kInf;
  for (size_t i = 0; i + 1 < slots.size(); ++i) mn = std::min(mn, slots[i + 1] - slots[i]);
  return 1e-9 * mn;
}

std::vector<double> sample_block_offsets(const BlockStructure& bs, double margin, Rng& rng) {
  std::vector<double> q;
  q.reserve(bs.blocks.size());
  for (const Block& b : bs.blocks) {
    double span = b.d - margin;
    if (span <= 0) throw input_error("sample_block_offsets: margin exceeds block width");
    q.push_back(rng.uniform(-span, span));
  }
  return q;
}

std::vector<double> observation_prices(const std::vector<double>& slots,
                                       const std::vector<char>& occupied,
                                       const std::vector<double>& offsets) {
  BlockStructure bs = blocks(slots, occupied);
  if (offsets.size() != bs.blocks.size())
    throw input_error("observation_prices: one offset per block required");
  int m = static_cast<int>(slots.size());
  std::vector<double> p(m, kInf);
  double mn = kInf;
  for (int v : bs.vacant_slots) {
    double sum = 0;
    for (size_t j = 0; j < bs.blocks.size(); ++j)
      if (v <= bs.blocks[j].left_vacant) sum += offsets[j];
    p[v] = sum;
    mn = std::min(mn, sum);
  }
  for (int v : bs.vacant_slots) p[v] -= mn;
  return p;
}

std::vector<double> min_sum_prices(const std::vector<double>& slots,
                                   const std::vector<char>& occupied,
                                   const std::vector<double>& offsets) {
  BlockStructure bs = blocks(slots, occupied);
  if (offsets.size() != bs.blocks.size())
    throw input_error("min_sum_prices: one offset per block required");
  double margin = strict_margin(slots);
  int nv = static_cast<int>(bs.vacant_slots.size());
  std::vector<int> var_of(slots.size(), -1);
  for (int i = 0; i < nv; ++i) var_of[bs.vacant_slots[i]] = i;

  // constraints p[a] - p[b] <= w
  struct Ineq {
    int a, b;
    double w;
  };
  std::vector<Ineq> cons;
  for (size_t j = 0; j < bs.blocks.size(); ++j) {
    int l = var_of[bs.blocks[j].left_vacant], r = var_of[bs.blocks[j].right_vacant];
    cons.push_back({l, r, offsets[j]});
    cons.push_back({r, l, -offsets[j]});
  }
  for (int i = 0; i + 1 < nv; ++i) {
    double gap = slots[bs.vacant_slots[i + 1]] - slots[bs.vacant_slots[i]] - margin;
    if (gap <= 0) throw input_error("min_sum_prices: margin exceeds slot gap");
    cons.push_back({i, i + 1, gap});
    cons.push_back({i + 1, i, gap});
  }

  // least nonnegative solution: raise lower bounds to a fixpoint
  std::vector<double> lb(nv, 0.0);
  for (int round = 0; round <= nv + 1; ++round) {
    bool changed = false;
    for (const Ineq& c : cons) {
      double need = lb[c.a] - c.w;
      if (need > lb[c.b] + 1e-15 * (1 + std::abs(need))) {
        lb[c.b] = need;
        changed = true;
      }
    }
    if (!changed) break;
    if (round == nv + 1) throw internal_error("min_sum_prices: constraint system diverged");
  }
  std::vector<double> p(slots.size(), kInf);
  for (int i = 0; i < nv; ++i) p[bs.vacant_slots[i]] = lb[i];
  return p;
}

std::vector<double> harmonic_prices(const std::vector<double>& slots,
                                    const std::vector<char>& occupied, Rng& rng) {
  BlockStructure bs = blocks(slots, occupied);
  auto offsets = sample_block_offsets(bs, strict_margin(slots), rng);
  return observation_prices(slots, occupied, offsets);
}

MonotoneCdf monotone_cdf(const std::vector<double>& deltas, const std::vector<double>& p_left,
                         double d, double margin) {
  size_t t = deltas.size();
  if (t == 0 || p_left.size() != t) throw input_error("monotone_cdf: size mismatch");
  if (d <= 0 || margin < 0 || margin >= d / 4) throw input_error("monotone_cdf: bad width");
  for (size_t i = 0; i < t; ++i) {
    if (std::abs(deltas[i]) >= d - 2 * margin)
      throw input_error("monotone_cdf: delta outside the open block interval");
    if (p_left[i] < 0 || p_left[i] > 1) throw input_error("monotone_cdf: probability out of range");
    if (i > 0) {
      if (!(deltas[i] > deltas[i - 1])) throw input_error("monotone_cdf: deltas must increase");
      if (p_left[i] > p_left[i - 1] + 1e-12)
        throw input_error("monotone_cdf: left probabilities must not increase");
    }
  }
  MonotoneCdf cdf;
  double acc = 0;  // cdf value reached so far
  for (size_t i = 0; i < t; ++i) {
    double target = 1 - p_left[i];
    double mass = target - acc;
    if (mass <= 0) continue;
    double lo = (i == 0) ? -(d - 2 * margin) : deltas[i - 1];
    cdf.z.push_back(0.5 * (lo + deltas[i]));
    cdf.mass.push_back(mass);
    acc = target;
  }
  if (1 - acc > 0) {
    cdf.z.push_back(0.5 * (deltas[t - 1] + (d - 2 * margin)));
    cdf.mass.push_back(1 - acc);
  }
  return cdf;
}

double sample_cdf(const MonotoneCdf& cdf, Rng& rng) {
  if (cdf.z.empty()) throw input_error("sample_cdf: empty distribution");
  double u = rng.uniform();
  double acc = 0;
  for (size_t i = 0; i < cdf.z.size(); ++i) {
    acc += cdf.mass[i];
    if (u < acc) return cdf.z[i];
  }
  return cdf.z.back();
}

std::vector<double> monotone_prices(const std::vector<double>& slots,
                                    const std::vector<char>& occupied, Rng& rng) {
  BlockStructure bs = blocks(slots, occupied);
  double margin = strict_margin(slots);
  std::vector<double> q(bs.blocks.size(), 0.0);
  for (size_t j = 0; j < bs.blocks.size(); ++j) {
    const Block& b = bs.blocks[j];
    double L = slots[b.left_vacant], R = slots[b.right_vacant];
    std::vector<double> deltas, pl;
    for (int v = b.first_occ; v <= b.last_occ; ++v) {
      deltas.push_back((slots[v] - L) - (R - slots[v]));
      pl.push_back((R - slots[v]) / b.d);
    }
    q[j] = sample_cdf(monotone_cdf(deltas, pl, b.d, margin), rng);
  }
  int m = static_cast<int>(slots.size());
  std::vector<double> p(m, kInf);
  double mn = kInf;
  for (int v : bs.vacant_slots) {
    double sum = 0;
    for (size_t j = 0; j < bs.blocks.size(); ++j)
      if (v >= bs.blocks[j].right_vacant) sum += q[j];
    p[v] = sum;
    mn = std::min(mn, sum);
  }
  for (int v : bs.vacant_slots) p[v] -= mn;
  return p;
}

TransformResult transform_metric(const ParkingInstance& instance, double z, double c) {
  instance.validate();
  if (z <= 0 || c <= 1) throw input_error("transform_metric: need z > 0 and c > 1");
  int n = static_cast<int>(instance.goals.size());
  if (n < 1) throw input_error("transform_metric: no cars");
  int m = static_cast<int>(instance.slots.size());

  TransformResult out;
  out.cut = z;
  out.floor_gap = z / (2.0 * c * n * n);
  out.slot_component.resize(m);
  out.slot_index.resize(m);

  std::vector<double> coord(m);  // rewritten coordinate of each original slot
  ParkingInstance comp;
  auto flush = [&]() {
    if (!comp.slots.empty()) out.components.push_back(comp);
    comp = ParkingInstance{};
  };
  for (int i = 0; i < m; ++i) {
    if (i > 0 && instance.slots[i] - instance.slots[i - 1] >= z) flush();
    double pos = comp.slots.empty()
                     ? 0.0
                     : comp.slots.back() +
                           std::max(instance.slots[i] - instance.slots[i - 1], out.floor_gap);
    coord[i] = pos;
    out.slot_component[i] = static_cast<int>(out.components.size());
    out.slot_index[i] = static_cast<int>(comp.slots.size());
    comp.slots.push_back(pos);
    comp.occupied.push_back(instance.occupied[i]);
  }
  flush();

  for (double g : instance.goals) {
    if (g < instance.slots.front() || g > instance.slots.back())
      throw input_error("transform_metric: goal outside the slot hull");
    int i = 0;
    while (i + 1 < m && instance.slots[i + 1] < g) ++i;
    // g lies in [slots[i], slots[i+1]] or on slots[i]
    if (g == instance.slots[i] || i + 1 >= m) {
      out.goal_component.push_back(out.slot_component[i]);
      out.components[out.slot_component[i]].goals.push_back(coord[i]);
      continue;
    }
    if (g == instance.slots[i + 1]) {
      out.goal_component.push_back(out.slot_component[i + 1]);
      out.components[out.slot_component[i + 1]].goals.push_back(coord[i + 1]);
      continue;
    }
    if (out.slot_component[i] != out.slot_component[i + 1])
      throw input_error("transform_metric: goal inside a cut gap");
    double gap = instance.slots[i + 1] - instance.slots[i];
    double f = (g - instance.slots[i]) / gap;
    double ng = coord[i] + f * (coord[i + 1] - coord[i]);
    out.goal_component.push_back(out.slot_component[i]);
    out.components[out.slot_component[i]].goals.push_back(ng);
  }
  for (const ParkingInstance& pc : out.components) pc.validate();
  return out;
}

ParkingInstance adversarial_instance(int n, double eps) {
  if (n < 2 || n > 40) throw input_error("adversarial_instance: need 2 <= n <= 40");
  if (eps <= 0 || eps >= 0.5) throw input_error("adversarial_instance: need 0 < eps < 0.5");
  ParkingInstance inst;
  inst.slots.push_back(0.0);
  for (int i = 0; i < n; ++i) inst.slots.push_back(std::ldexp(1.0, i));
  inst.occupied.assign(inst.slots.size(), 0);
  inst.goals.push_back(1.0);
  for (int i = 2; i <= n; ++i) inst.goals.push_back(std::ldexp(1.0, i - 2) + eps);
  inst.validate();
  return inst;
}

double matching_offline_opt(const std::vector<double>& slots, const std::vector<char>& occupied,
                            const std::vector<double>& goals) {
  check_slots(slots, occupied);
  std::vector<int> vac;
  for (int i = 0; i < static_cast<int>(slots.size()); ++i)
    if (!occupied[i]) vac.push_back(i);
  if (goals.size() > vac.size()) throw capacity_error("matching_offline_opt: more cars than slots");
  if (goals.empty()) return 0.0;
  std::vector<std::vector<double>> cost(goals.size(), std::vector<double>(vac.size()));
  for (size_t i = 0; i < goals.size(); ++i)
    for (size_t j = 0; j < vac.size(); ++j) cost[i][j] = std::abs(goals[i] - slots[vac[j]]);
  auto assign = metric::assign_min_cost(cost);
  double total = 0;
  for (size_t i = 0; i < goals.size(); ++i) total += cost[i][assign[i]];
  return total;
}

}  // namespace opp::parking
