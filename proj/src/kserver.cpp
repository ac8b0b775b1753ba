#include "kserver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <utility>

namespace opp::kserver {

namespace {

constexpr double kEps = 1e-12;

}  // namespace

std::vector<int> sorted_order(const std::vector<double>& pos) {
  std::vector<int> ord(pos.size());
  std::iota(ord.begin(), ord.end(), 0);
  std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) {
    if (pos[a] != pos[b]) return pos[a] < pos[b];
    return a < b;
  });
  return ord;
}

StepResult dc_step(ServerConfig& cfg, double r) {
  int k = cfg.k();
  if (k < 1) throw input_error("dc_step: empty configuration");
  auto ord = sorted_order(cfg.pos);
  int li = -1, ri = -1;
  for (int i = 0; i < k; ++i) {
    if (cfg.pos[ord[i]] <= r) li = i;
    if (ri < 0 && cfg.pos[ord[i]] >= r) ri = i;
  }
  StepResult out;
  if (li < 0 || ri < 0) {
    // r outside the hull: only the nearest server moves
    int sid = (li < 0) ? ord[0] : ord[k - 1];
    out.cost = std::abs(cfg.pos[sid] - r);
    cfg.travel[sid] += out.cost;
    cfg.pos[sid] = r;
    out.served = sid;
    return out;
  }
  int ls = ord[li], rs = ord[ri];
  if (ls == rs) {
    out.served = ls;  // already on r
    return out;
  }
  double dl = r - cfg.pos[ls];
  double dr = cfg.pos[rs] - r;
  double step = std::min(dl, dr);
  cfg.pos[ls] += step;
  cfg.pos[rs] -= step;
  cfg.travel[ls] += step;
  cfg.travel[rs] += step;
  out.cost = 2 * step;
  out.served = (dl <= dr) ? ls : rs;
  cfg.pos[out.served] = r;
  return out;
}

LazyResult lazy_step(VirtualPair& pair, double r) {
  int k = pair.virt.k();
  if (k != pair.real.k() || k < 1) throw input_error("lazy_step: mismatched configurations");
  LazyResult out;
  StepResult v = dc_step(pair.virt, r);
  out.virtual_cost = v.cost;

  auto vorder = sorted_order(pair.virt.pos);
  auto rorder = sorted_order(pair.real.pos);
  std::vector<double> xs(k), ys(k);
  for (int i = 0; i < k; ++i) {
    xs[i] = pair.virt.pos[vorder[i]];
    ys[i] = pair.real.pos[rorder[i]];
  }
  int r_rank = -1;
  for (int i = 0; i < k; ++i)
    if (vorder[i] == v.served) r_rank = i;
  auto base = metric::canonical_matching(xs, ys);
  auto local = metric::r_local_matching(
      k, r_rank, [&](int i, int j) { return std::abs(xs[i] - ys[j]); },
      [&](int i, int j) { return std::abs(ys[i] - ys[j]); }, base);
  int sid = rorder[local.to_y[r_rank]];
  out.served = sid;
  out.real_cost = std::abs(pair.real.pos[sid] - r);
  pair.real.travel[sid] += out.real_cost;
  pair.real.pos[sid] = r;
  return out;
}

int lazy_owner(const VirtualPair& pair, double r) {
  VirtualPair clone = pair;
  return lazy_step(clone, r).served;
}

RegionMap regions(const VirtualPair& pair) {
  RegionMap map;
  int k = pair.real.k();
  map.order = sorted_order(pair.real.pos);
  map.anchors.resize(k);
  for (int i = 0; i < k; ++i) map.anchors[i] = pair.real.pos[map.order[i]];

  std::vector<int> rank_of_id(k);
  for (int i = 0; i < k; ++i) rank_of_id[map.order[i]] = i;
  auto owner_rank = [&](double x) { return rank_of_id[lazy_owner(pair, x)]; };

  auto vorder = sorted_order(pair.virt.pos);
  std::vector<double> vmids;
  for (int j = 0; j + 1 < k; ++j)
    vmids.push_back(0.5 * (pair.virt.pos[vorder[j]] + pair.virt.pos[vorder[j + 1]]));

  for (int i = 0; i + 1 < k; ++i) {
    double lo = map.anchors[i], hi = map.anchors[i + 1];
    if (hi - lo <= 0) {
      map.thresholds.push_back(lo);
      continue;
    }
    if (owner_rank(lo) > i || owner_rank(hi) <= i)
      throw internal_error("regions: ownership not anchored at server positions");
    double tol = 1e-9 * (hi - lo);
    double a = lo, b = hi;
    while (b - a > tol) {
      double mid = 0.5 * (a + b);
      (owner_rank(mid) <= i ? a : b) = mid;
    }
    double v = 0.5 * (a + b);
    // snap to the exact virtual midpoint or server position when in range
    double best = v, bestgap = 4 * tol;
    for (double cand : vmids) {
      if (cand < lo || cand > hi) continue;
      if (std::abs(cand - v) < bestgap) {
        bestgap = std::abs(cand - v);
        best = cand;
      }
    }
    for (double cand : {lo, hi}) {
      if (std::abs(cand - v) < bestgap) {
        bestgap = std::abs(cand - v);
        best = cand;
      }
    }
    map.thresholds.push_back(std::clamp(best, lo, hi));
  }
  return map;
}

int region_rank(const RegionMap& map, double r) {
  int k = static_cast<int>(map.order.size());
  for (int i = 0; i + 1 < k; ++i)
    if (r <= map.thresholds[i]) return i;
  return k - 1;
}

int region_owner(const RegionMap& map, double r) { return map.order[region_rank(map, r)]; }

RegionMap perturb_thresholds(RegionMap map, double eps) {
  if (eps <= 0) throw input_error("perturb_thresholds: eps must be positive");
  int k = static_cast<int>(map.order.size());
  for (int i = 0; i + 1 < k; ++i) {
    double lo = map.anchors[i], hi = map.anchors[i + 1];
    double gap = hi - lo;
    if (gap <= 0) continue;
    double e = std::min(eps, gap / 4);
    double& v = map.thresholds[i];
    if (std::abs(v - lo) <= kEps * (1 + std::abs(lo))) v = lo + e;
    if (std::abs(hi - v) <= kEps * (1 + std::abs(hi))) v = hi - e;
  }
  return map;
}

std::vector<double> server_prices(const RegionMap& map) {
  int k = static_cast<int>(map.order.size());
  if (k < 1) throw input_error("server_prices: empty map");
  std::vector<double> by_rank(k, 0.0);
  for (int i = 0; i + 1 < k; ++i) {
    double v = map.thresholds[i];
    by_rank[i + 1] = by_rank[i] + std::abs(map.anchors[i] - v) - std::abs(map.anchors[i + 1] - v);
  }
  double mn = *std::min_element(by_rank.begin(), by_rank.end());
  std::vector<double> out(k);
  for (int i = 0; i < k; ++i) out[map.order[i]] = by_rank[i] - mn;
  return out;
}

std::vector<double> balance2_prices(const ServerConfig& cfg) {
  if (cfg.k() != 2) throw input_error("balance2_prices: requires exactly two servers");
  return {cfg.travel[0] / 2, cfg.travel[1] / 2};
}

std::vector<double> kserver_agent_options(const std::vector<double>& prices,
                                          const ServerConfig& cfg, double r) {
  if (static_cast<int>(prices.size()) != cfg.k())
    throw input_error("kserver_agent_options: price vector size mismatch");
  std::vector<double> out(cfg.k());
  for (int i = 0; i < cfg.k(); ++i) out[i] = prices[i] + std::abs(cfg.pos[i] - r);
  return out;
}

double kserver_offline_opt(const std::vector<double>& requests,
                           const std::vector<double>& initial) {
  int k = static_cast<int>(initial.size());
  int n = static_cast<int>(requests.size());
  if (k < 1) throw input_error("kserver_offline_opt: no servers");
  if (k > 6 || n > 24) throw input_error("kserver_offline_opt: instance too large");
  std::vector<double> s0 = initial;
  std::sort(s0.begin(), s0.end());
  std::map<std::vector<double>, double> cur;
  cur[s0] = 0.0;
  for (double r : requests) {
    std::map<std::vector<double>, double> nxt;
    for (const auto& [state, c] : cur) {
      for (int j = 0; j < k; ++j) {
        std::vector<double> ns = state;
        double move = std::abs(ns[j] - r);
        ns[j] = r;
        std::sort(ns.begin(), ns.end());
        auto it = nxt.find(ns);
        if (it == nxt.end() || c + move < it->second) nxt[ns] = c + move;
      }
    }
    cur = std::move(nxt);
  }
  double best = cur.begin()->second;
  for (const auto& [state, c] : cur) best = std::min(best, c);
  return best;
}

double kserver_offline_opt_tree(const metric::MetricSpace& t, const std::vector<int>& requests,
                                const std::vector<int>& initial) {
  if (t.kind() != metric::SpaceKind::tree) throw input_error("kserver_offline_opt_tree: not a tree");
  int k = static_cast<int>(initial.size());
  int n = static_cast<int>(requests.size());
  if (k < 1) throw input_error("kserver_offline_opt_tree: no servers");
  if (k > 6 || n > 24) throw input_error("kserver_offline_opt_tree: instance too large");
  std::vector<int> s0 = initial;
  std::sort(s0.begin(), s0.end());
  std::map<std::vector<int>, double> cur;
  cur[s0] = 0.0;
  for (int r : requests) {
    std::map<std::vector<int>, double> nxt;
    for (const auto& [state, c] : cur) {
      for (int j = 0; j < k; ++j) {
        std::vector<int> ns = state;
        double move = t.distance(ns[static_cast<std::size_t>(j)], r);
        ns[static_cast<std::size_t>(j)] = r;
        std::sort(ns.begin(), ns.end());
        auto it = nxt.find(ns);
        if (it == nxt.end() || c + move < it->second) nxt[ns] = c + move;
      }
    }
    cur = std::move(nxt);
  }
  double best = cur.begin()->second;
  for (const auto& [state, c] : cur) best = std::min(best, c);
  return best;
}

// ---- tree metrics ----------------------------------------------------

TreePoint TreePoint::on_edge(const metric::MetricSpace& t, int child, double offset) {
  if (t.kind() != metric::SpaceKind::tree) throw input_error("TreePoint: not a tree space");
  if (child <= 0 || child >= t.size()) throw input_error("TreePoint: bad edge child");
  int par = t.parent()[child];
  double w = t.edge_weight(par, child);
  if (offset < -kEps || offset > w + kEps) throw input_error("TreePoint: offset outside edge");
  if (offset <= kEps) return at_vertex(par);
  if (offset >= w - kEps) return at_vertex(child);
  TreePoint p;
  p.vertex = -1;
  p.edge_child = child;
  p.offset = offset;
  return p;
}

double tree_distance(const metric::MetricSpace& t, const TreePoint& p, const TreePoint& q) {
  if (p.is_vertex() && q.is_vertex()) return t.distance(p.vertex, q.vertex);
  if (p.is_vertex()) {
    int qp = t.parent()[q.edge_child], qc = q.edge_child;
    double w = t.edge_weight(qp, qc);
    return std::min(q.offset + t.distance(qp, p.vertex), (w - q.offset) + t.distance(qc, p.vertex));
  }
  if (q.is_vertex()) return tree_distance(t, q, p);
  if (p.edge_child == q.edge_child) return std::abs(p.offset - q.offset);
  int pp = t.parent()[p.edge_child], pc = p.edge_child;
  int qp = t.parent()[q.edge_child], qc = q.edge_child;
  double wp = t.edge_weight(pp, pc), wq = t.edge_weight(qp, qc);
  double best = p.offset + t.distance(pp, qp) + q.offset;
  best = std::min(best, p.offset + t.distance(pp, qc) + (wq - q.offset));
  best = std::min(best, (wp - p.offset) + t.distance(pc, qp) + q.offset);
  best = std::min(best, (wp - p.offset) + t.distance(pc, qc) + (wq - q.offset));
  return best;
}

TreePoint tree_move(const metric::MetricSpace& t, const TreePoint& start, const TreePoint& target,
                    double dist) {
  TreePoint p = start;
  while (true) {
    double remain = tree_distance(t, p, target);
    if (dist >= remain) return target;
    if (dist <= 0) return p;
    if (!p.is_vertex()) {
      int a = t.parent()[p.edge_child], b = p.edge_child;
      double w = t.edge_weight(a, b);
      if (!target.is_vertex() && target.edge_child == p.edge_child)
        return TreePoint::on_edge(t, b, p.offset + (target.offset > p.offset ? dist : -dist));
      double via_a = p.offset + tree_distance(t, TreePoint::at_vertex(a), target);
      double via_b = (w - p.offset) + tree_distance(t, TreePoint::at_vertex(b), target);
      if (via_a <= via_b) {
        if (dist < p.offset) return TreePoint::on_edge(t, b, p.offset - dist);
        dist -= p.offset;
        p = TreePoint::at_vertex(a);
      } else {
        if (dist < w - p.offset) return TreePoint::on_edge(t, b, p.offset + dist);
        dist -= w - p.offset;
        p = TreePoint::at_vertex(b);
      }
      continue;
    }
    int u = p.vertex;
    if (!target.is_vertex()) {
      int a2 = t.parent()[target.edge_child], b2 = target.edge_child;
      double w2 = t.edge_weight(a2, b2);
      if (a2 == u) return TreePoint::on_edge(t, b2, dist);
      if (b2 == u) return TreePoint::on_edge(t, b2, w2 - dist);
    }
    double tol = 1e-9 * (1.0 + remain);
    int chosen = -1;
    double cw = 0;
    for (int nb : t.adjacency()[u]) {
      double w = t.edge_weight(u, nb);
      if (std::abs(w + tree_distance(t, TreePoint::at_vertex(nb), target) - remain) <= tol) {
        chosen = nb;
        cw = w;
        break;
      }
    }
    if (chosen < 0) throw internal_error("tree_move: no on-path neighbour");
    if (dist < cw) {
      bool down = t.parent()[chosen] == u;
      return TreePoint::on_edge(t, down ? chosen : u, down ? dist : cw - dist);
    }
    dist -= cw;
    p = TreePoint::at_vertex(chosen);
  }
}

StepResult dc_step_tree(const metric::MetricSpace& t, TreeConfig& cfg, const TreePoint& r) {
  int k = cfg.k();
  if (k < 1) throw input_error("dc_step_tree: empty configuration");
  StepResult out;
  for (int round = 0; round <= 8 * k + 8; ++round) {
    std::vector<double> d(k);
    for (int i = 0; i < k; ++i) d[i] = tree_distance(t, cfg.pos[i], r);
    int at = -1;
    for (int i = 0; i < k; ++i)
      if (d[i] <= kEps && at < 0) at = i;
    if (at >= 0) {
      cfg.pos[at] = r;
      out.served = at;
      return out;
    }
    // a server is active while no other server sits on its path to r
    std::vector<char> active(k, 1);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k && active[i]; ++j) {
        if (j == i) continue;
        double dij = tree_distance(t, cfg.pos[i], cfg.pos[j]);
        if (dij <= kEps) {
          if (j < i) active[i] = 0;  // coincident pair: the smaller id leads
          continue;
        }
        if (d[j] < d[i] && std::abs(dij + d[j] - d[i]) <= 1e-9 * (1 + d[i])) active[i] = 0;
      }
    }
    double step = d[0] + 1;
    for (int i = 0; i < k; ++i)
      if (active[i]) step = std::min(step, d[i]);
    // blocking events: the nearer of two active servers reaches the merge
    // point of their paths, landing on the farther one's path
    for (int i = 0; i < k; ++i) {
      if (!active[i]) continue;
      for (int j = 0; j < k; ++j) {
        if (j == i || !active[j] || d[j] > d[i]) continue;
        if (d[j] == d[i] && j > i) continue;
        double dij = tree_distance(t, cfg.pos[i], cfg.pos[j]);
        double dm = 0.5 * (d[i] + d[j] - dij);
        double tb = d[j] - dm;
        if (tb > kEps && tb < step) step = tb;
      }
    }
    if (step <= 0) throw internal_error("dc_step_tree: stalled event loop");
    for (int i = 0; i < k; ++i) {
      if (!active[i]) continue;
      cfg.pos[i] = tree_move(t, cfg.pos[i], r, step);
      cfg.travel[i] += step;
      out.cost += step;
    }
  }
  throw internal_error("dc_step_tree: event loop did not converge");
}

LazyResult lazy_step_tree(const metric::MetricSpace& t, TreePair& pair, const TreePoint& r) {
  int k = pair.virt.k();
  if (k != pair.real.k() || k < 1) throw input_error("lazy_step_tree: mismatched configurations");
  LazyResult out;
  StepResult v = dc_step_tree(t, pair.virt, r);
  out.virtual_cost = v.cost;
  auto dxy = [&](int i, int j) { return tree_distance(t, pair.virt.pos[i], pair.real.pos[j]); };
  auto dyy = [&](int i, int j) { return tree_distance(t, pair.real.pos[i], pair.real.pos[j]); };
  auto base = metric::min_cost_matching_oracle(k, dxy);
  auto local = metric::r_local_matching(k, v.served, dxy, dyy, base);
  int sid = local.to_y[v.served];
  out.served = sid;
  out.real_cost = tree_distance(t, pair.real.pos[sid], r);
  pair.real.travel[sid] += out.real_cost;
  pair.real.pos[sid] = r;
  return out;
}

int lazy_owner_tree(const metric::MetricSpace& t, const TreePair& pair, const TreePoint& r) {
  TreePair clone = pair;
  return lazy_step_tree(t, clone, r).served;
}

TreeRegionMap regions_tree(const metric::MetricSpace& t, const TreePair& pair) {
  if (t.kind() != metric::SpaceKind::tree) throw input_error("regions_tree: not a tree space");
  TreeRegionMap map;
  int m = t.size();
  map.vertex_owner.resize(m);
  for (int v = 0; v < m; ++v)
    map.vertex_owner[v] = lazy_owner_tree(t, pair, TreePoint::at_vertex(v));

  auto owner_at = [&](int child, double off) {
    return lazy_owner_tree(t, pair, TreePoint::on_edge(t, child, off));
  };

  for (int c = 1; c < m; ++c) {
    int par = t.parent()[c];
    double w = t.edge_weight(par, c);
    // segment break points: edge ends plus every real server strictly inside
    std::vector<double> cuts = {0.0, w};
    for (int i = 0; i < pair.real.k(); ++i)
      if (!pair.real.pos[i].is_vertex() && pair.real.pos[i].edge_child == c)
        cuts.push_back(pair.real.pos[i].offset);
    std::sort(cuts.begin(), cuts.end());
    // Regions are subtrees, so owners along a segment form non-repeating
    // runs; a midpoint owned by a third server splits the search in two.
    std::function<void(double, double, int, int)> split = [&](double a, double b, int oa, int ob) {
      if (oa == ob) return;
      double tol = 1e-9 * (1 + w);
      if (b - a <= tol) {
        TreeRegionMap::Boundary bd;
        bd.left_server = oa;
        bd.right_server = ob;
        bd.threshold = TreePoint::on_edge(t, c, 0.5 * (a + b));
        map.boundaries.push_back(bd);
        return;
      }
      double mid = 0.5 * (a + b);
      int om = owner_at(c, mid);
      if (om == oa) {
        split(mid, b, oa, ob);
      } else if (om == ob) {
        split(a, mid, oa, ob);
      } else {
        split(a, mid, oa, om);
        split(mid, b, om, ob);
      }
    };
    for (size_t s = 0; s + 1 < cuts.size(); ++s) {
      double lo = cuts[s], hi = cuts[s + 1];
      if (hi - lo <= kEps) continue;
      int olo = (lo == 0.0) ? map.vertex_owner[par] : owner_at(c, lo);
      int ohi = (hi == w) ? map.vertex_owner[c] : owner_at(c, hi);
      split(lo, hi, olo, ohi);
    }
  }
  return map;
}

std::vector<double> server_prices_tree(const metric::MetricSpace& t, const TreeRegionMap& map,
                                       const TreeConfig& real) {
  int k = real.k();
  if (k < 1) throw input_error("server_prices_tree: empty configuration");
  std::vector<double> price(k, 0.0);
  std::vector<char> done(k, 0);
  int seed = -1;
  for (int owner : map.vertex_owner)
    if (seed < 0 || owner < seed) seed = owner;
  if (seed < 0) throw internal_error("server_prices_tree: no owners");
  done[seed] = 1;
  // region-adjacency relaxation; the adjacency graph of a tree partition is
  // itself a tree so one equation per boundary pins every price
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& bd : map.boundaries) {
      double dl = tree_distance(t, real.pos[bd.left_server], bd.threshold);
      double dr = tree_distance(t, real.pos[bd.right_server], bd.threshold);
      for (auto [from, to, dfrom, dto] :
           {std::tuple{bd.left_server, bd.right_server, dl, dr},
            std::tuple{bd.right_server, bd.left_server, dr, dl}}) {
        if (!done[from]) continue;
        double want = price[from] + dfrom - dto;
        if (!done[to]) {
          price[to] = want;
          done[to] = 1;
          changed = true;
        } else if (std::abs(price[to] - want) > 1e-9 * (1 + std::abs(want))) {
          throw internal_error("server_prices_tree: inconsistent boundary cycle");
        }
      }
    }
  }
  for (int i = 0; i < k; ++i) {
    if (done[i]) continue;
    // only a server fully shadowed by a coincident twin lacks a region
    bool fixed = false;
    for (int j = 0; j < k && !fixed; ++j) {
      if (!done[j]) continue;
      if (tree_distance(t, real.pos[i], real.pos[j]) <= kEps) {
        price[i] = price[j];
        done[i] = 1;
        fixed = true;
      }
    }
    if (!fixed) throw internal_error("server_prices_tree: unpriced detached server");
  }
  double mn = *std::min_element(price.begin(), price.end());
  for (double& p : price) p -= mn;
  return price;
}

}  // namespace opp::kserver
