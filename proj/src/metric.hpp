#pragma once

#include <functional>
#include <vector>

#include "errors.hpp"

namespace opp::metric {

enum class SpaceKind { line, tree, matrix };

// Finite metric space over dense integer vertex ids. Construction validates
// the metric axioms; distance queries are O(1) afterwards.
class MetricSpace {
 public:
  // Weighted line: vertex i sits at positions[i]; strictly increasing.
  static MetricSpace line(std::vector<double> positions);
  // Tree: parent[0] = -1 for the root; edge i connects i to parent[i] with
  // weight edge_weight[i] > 0 (edge_weight[0] ignored).
  static MetricSpace tree(std::vector<int> parent, std::vector<double> edge_weight);
  // Explicit symmetric matrix with zero diagonal; triangle inequality checked
  // over all triples.
  static MetricSpace matrix(std::vector<std::vector<double>> d);

  SpaceKind kind() const { return kind_; }
  int size() const { return size_; }
  double distance(int u, int v) const;

  // Line only.
  double position(int v) const;
  const std::vector<double>& positions() const;

  // Tree only.
  const std::vector<int>& parent() const;
  // First vertex after u on the path to v (u != v).
  int path_next(int u, int v) const;
  // Weight of the tree edge (u,v); u and v must be adjacent.
  double edge_weight(int u, int v) const;
  const std::vector<std::vector<int>>& adjacency() const;

 private:
  MetricSpace() = default;
  void check_vertex(int v) const;

  SpaceKind kind_ = SpaceKind::matrix;
  int size_ = 0;
  std::vector<double> positions_;
  std::vector<int> parent_;
  std::vector<std::vector<int>> adj_;
  std::vector<std::vector<double>> dist_;
  std::vector<std::vector<int>> next_;
};

// Perfect matching of equally sized point sets X and Y.
struct Matching {
  std::vector<int> to_y;  // to_y[i] = index of the Y point matched to x_i
  double cost = 0.0;
};

// Sorted-order matching x_i <-> y_i; minimum cost on a line (inputs must be
// ascending).
Matching canonical_matching(const std::vector<double>& xs, const std::vector<double>& ys);

// Exact minimum-cost perfect matching for an arbitrary cost function.
// Factorial enumeration up to 8 points (lexicographically first optimum),
// Hungarian assignment beyond that.
Matching min_cost_matching_oracle(int n, const std::function<double(int, int)>& cost);

// Minimum-cost matching in which x_r is matched to a Y point with no other
// Y point strictly between them. `dist_xy` and `dist_yy` evaluate the metric;
// the space must have unique paths (line or tree), which makes
// "y' between x_r and y" equivalent to d(x_r,y') + d(y',y) = d(x_r,y).
// `base` is the matching to rematch (canonical on a line, any optimum
// otherwise).
Matching r_local_matching(int n, int r, const std::function<double(int, int)>& dist_xy,
                          const std::function<double(int, int)>& dist_yy, Matching base);

// Convenience wrappers for vertex sets inside a MetricSpace.
Matching r_local_matching(const std::vector<int>& xs, const std::vector<int>& ys, int r_index,
                          const MetricSpace& space);
Matching min_cost_matching_oracle(const std::vector<int>& xs, const std::vector<int>& ys,
                                  const MetricSpace& space);

// Minimum-cost assignment of n rows to m >= n columns; returns column per row.
std::vector<int> assign_min_cost(const std::vector<std::vector<double>>& cost);

// Sum of consecutive-step distances of tau over [min(l,l2), max(l,l2)).
// Indices are 1-based positions into the materialized sequence.
double traversal_distance(const std::vector<int>& tau, const MetricSpace& space, int l, int l2);

}  // namespace opp::metric
