#include "metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace opp::metric {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* msg) {
  if (!ok) throw input_error(msg);
}

}  // namespace

MetricSpace MetricSpace::line(std::vector<double> positions) {
  require(!positions.empty(), "line: empty position list");
  for (std::size_t i = 1; i < positions.size(); ++i)
    require(positions[i] > positions[i - 1], "line: positions must be strictly increasing");
  MetricSpace s;
  s.kind_ = SpaceKind::line;
  s.size_ = static_cast<int>(positions.size());
  s.positions_ = std::move(positions);
  return s;
}

MetricSpace MetricSpace::tree(std::vector<int> parent, std::vector<double> edge_weight) {
  int n = static_cast<int>(parent.size());
  require(n >= 1, "tree: empty vertex list");
  require(edge_weight.size() == parent.size(), "tree: weight list size mismatch");
  require(parent[0] == -1, "tree: vertex 0 must be the root");
  MetricSpace s;
  s.kind_ = SpaceKind::tree;
  s.size_ = n;
  s.parent_ = parent;
  s.adj_.assign(n, {});
  for (int v = 1; v < n; ++v) {
    require(parent[v] >= 0 && parent[v] < v, "tree: parent[v] must precede v");
    require(edge_weight[v] > 0, "tree: edge weights must be positive");
    s.adj_[v].push_back(parent[v]);
    s.adj_[parent[v]].push_back(v);
  }
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0));
  for (int v = 1; v < n; ++v) w[v][parent[v]] = w[parent[v]][v] = edge_weight[v];
  s.dist_.assign(n, std::vector<double>(n, 0));
  s.next_.assign(n, std::vector<int>(n, -1));
  // Tree sizes stay small; all-pairs tables make distance and path hops O(1).
  for (int src = 0; src < n; ++src) {
    std::vector<int> stack{src};
    std::vector<char> seen(n, 0);
    seen[src] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : s.adj_[u]) {
        if (seen[v]) continue;
        seen[v] = 1;
        s.dist_[src][v] = s.dist_[src][u] + w[u][v];
        s.next_[src][v] = (u == src) ? v : s.next_[src][u];
        stack.push_back(v);
      }
    }
  }
  return s;
}

MetricSpace MetricSpace::matrix(std::vector<std::vector<double>> d) {
  int n = static_cast<int>(d.size());
  require(n >= 1, "matrix: empty");
  double scale = 0;
  for (int u = 0; u < n; ++u) {
    require(static_cast<int>(d[u].size()) == n, "matrix: not square");
    require(d[u][u] == 0, "matrix: nonzero diagonal");
    for (int v = 0; v < n; ++v) {
      require(d[u][v] >= 0, "matrix: negative distance");
      require(d[u][v] == d[v][u], "matrix: not symmetric");
      scale = std::max(scale, d[u][v]);
    }
  }
  double tol = 1e-12 * (1 + scale);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      for (int w = 0; w < n; ++w)
        require(d[u][w] <= d[u][v] + d[v][w] + tol, "matrix: triangle inequality violated");
  MetricSpace s;
  s.kind_ = SpaceKind::matrix;
  s.size_ = n;
  s.dist_ = std::move(d);
  return s;
}

void MetricSpace::check_vertex(int v) const {
  if (v < 0 || v >= size_) throw input_error("unknown vertex id");
}

double MetricSpace::distance(int u, int v) const {
  check_vertex(u);
  check_vertex(v);
  if (kind_ == SpaceKind::line) return std::abs(positions_[u] - positions_[v]);
  return dist_[u][v];
}

double MetricSpace::position(int v) const {
  require(kind_ == SpaceKind::line, "position: not a line space");
  check_vertex(v);
  return positions_[v];
}

const std::vector<double>& MetricSpace::positions() const {
  require(kind_ == SpaceKind::line, "positions: not a line space");
  return positions_;
}

const std::vector<int>& MetricSpace::parent() const {
  require(kind_ == SpaceKind::tree, "parent: not a tree space");
  return parent_;
}

int MetricSpace::path_next(int u, int v) const {
  require(kind_ == SpaceKind::tree, "path_next: not a tree space");
  check_vertex(u);
  check_vertex(v);
  require(u != v, "path_next: identical endpoints");
  return next_[u][v];
}

double MetricSpace::edge_weight(int u, int v) const {
  require(kind_ == SpaceKind::tree, "edge_weight: not a tree space");
  check_vertex(u);
  check_vertex(v);
  require(parent_[u] == v || parent_[v] == u, "edge_weight: vertices not adjacent");
  return dist_[u][v];
}

const std::vector<std::vector<int>>& MetricSpace::adjacency() const {
  require(kind_ == SpaceKind::tree, "adjacency: not a tree space");
  return adj_;
}

Matching canonical_matching(const std::vector<double>& xs, const std::vector<double>& ys) {
  require(xs.size() == ys.size(), "canonical_matching: size mismatch");
  require(std::is_sorted(xs.begin(), xs.end()), "canonical_matching: X not sorted");
  require(std::is_sorted(ys.begin(), ys.end()), "canonical_matching: Y not sorted");
  Matching m;
  m.to_y.resize(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    m.to_y[i] = static_cast<int>(i);
    m.cost += std::abs(xs[i] - ys[i]);
  }
  return m;
}

std::vector<int> assign_min_cost(const std::vector<std::vector<double>>& cost) {
  int n = static_cast<int>(cost.size());
  if (n == 0) return {};
  int m = static_cast<int>(cost[0].size());
  require(m >= n, "assign_min_cost: fewer columns than rows");
  std::vector<double> u(n + 1, 0), v(m + 1, 0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> result(n, -1);
  for (int j = 1; j <= m; ++j)
    if (p[j] > 0) result[p[j] - 1] = j - 1;
  return result;
}

Matching min_cost_matching_oracle(int n, const std::function<double(int, int)>& cost) {
  require(n >= 0, "matching oracle: negative size");
  Matching best;
  if (n == 0) return best;
  if (n <= 8) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best_cost = kInf;
    // Lexicographic enumeration with strict improvement keeps the first
    // optimal permutation, which pins golden expectations.
    do {
      double c = 0;
      for (int i = 0; i < n; ++i) c += cost(i, perm[i]);
      if (c < best_cost) {
        best_cost = c;
        best.to_y = perm;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    best.cost = best_cost;
    return best;
  }
  std::vector<std::vector<double>> a(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = cost(i, j);
  best.to_y = assign_min_cost(a);
  for (int i = 0; i < n; ++i) best.cost += a[i][best.to_y[i]];
  return best;
}

Matching r_local_matching(int n, int r, const std::function<double(int, int)>& dist_xy,
                          const std::function<double(int, int)>& dist_yy, Matching base) {
  require(r >= 0 && r < n, "r_local_matching: r not in X");
  require(static_cast<int>(base.to_y.size()) == n, "r_local_matching: bad base matching");
  int y = base.to_y[r];
  double d_ry = dist_xy(r, y);
  double tol = 1e-9 * (1 + d_ry);
  // The Y point on the path from r to its partner that lies closest to r;
  // swapping to it never increases the cost.
  int best = y;
  double best_d = d_ry;
  for (int cand = 0; cand < n; ++cand) {
    if (cand == y) continue;
    double d_rc = dist_xy(r, cand);
    if (std::abs(d_rc + dist_yy(cand, y) - d_ry) > tol) continue;
    if (d_rc < best_d - tol) {
      best_d = d_rc;
      best = cand;
    }
  }
  if (best != y) {
    int holder = -1;
    for (int i = 0; i < n; ++i)
      if (base.to_y[i] == best) holder = i;
    base.to_y[r] = best;
    base.to_y[holder] = y;
  }
  base.cost = 0;
  for (int i = 0; i < n; ++i) base.cost += dist_xy(i, base.to_y[i]);
  return base;
}

Matching r_local_matching(const std::vector<int>& xs, const std::vector<int>& ys, int r_index,
                          const MetricSpace& space) {
  require(xs.size() == ys.size(), "r_local_matching: size mismatch");
  int n = static_cast<int>(xs.size());
  auto dist_xy = [&](int i, int j) { return space.distance(xs[i], ys[j]); };
  auto dist_yy = [&](int i, int j) { return space.distance(ys[i], ys[j]); };
  Matching base = min_cost_matching_oracle(n, dist_xy);
  return r_local_matching(n, r_index, dist_xy, dist_yy, std::move(base));
}

Matching min_cost_matching_oracle(const std::vector<int>& xs, const std::vector<int>& ys,
                                  const MetricSpace& space) {
  require(xs.size() == ys.size(), "matching oracle: size mismatch");
  return min_cost_matching_oracle(static_cast<int>(xs.size()),
                                  [&](int i, int j) { return space.distance(xs[i], ys[j]); });
}

double traversal_distance(const std::vector<int>& tau, const MetricSpace& space, int l, int l2) {
  int lo = std::min(l, l2), hi = std::max(l, l2);
  require(lo >= 1 && hi <= static_cast<int>(tau.size()), "traversal_distance: index out of range");
  double sum = 0;
  for (int j = lo; j < hi; ++j) sum += space.distance(tau[j - 1], tau[j]);
  return sum;
}

}  // namespace opp::metric
