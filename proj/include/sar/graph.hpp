#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sar/errors.hpp"

namespace sar {

using IntMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;

/// Directed edge (tail -> head) between 0-based node indices.
struct Edge
{
  int tail;
  int head;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/**
 * Rooted out-branching tree over `node_count` nodes. Node 0 is the root.
 *
 * Edge order is whatever the caller supplied; it fixes the edge index j used by
 * every edge-indexed quantity (columns of D, rows of Q_e, lambda, ...).
 * Immutable once constructed.
 */
class Arborescence
{
public:
  /// Validates the edge list. Throws GraphError on any violation.
  Arborescence(int node_count, std::vector<Edge> edges);

  int node_count() const noexcept { return node_count_; }
  int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(int j) const { return edges_.at(static_cast<std::size_t>(j)); }

  /// Parent of `node`, -1 for the root.
  int parent(int node) const { return parent_.at(static_cast<std::size_t>(node)); }
  /// Index of the edge whose head is `node`, -1 for the root.
  int incoming_edge(int node) const { return incoming_edge_.at(static_cast<std::size_t>(node)); }
  /// Outgoing edge indices of `node` in edge order.
  const std::vector<int>& outgoing_edges(int node) const { return outgoing_.at(static_cast<std::size_t>(node)); }
  /// Nodes in breadth-first order from the root; every parent precedes its children.
  const std::vector<int>& topological_order() const noexcept { return order_; }

  /// True when every node has at most one child (a simple chain hanging from the root).
  bool is_chain() const;

private:
  int node_count_;
  std::vector<Edge> edges_;
  std::vector<int> parent_;
  std::vector<int> incoming_edge_;
  std::vector<std::vector<int>> outgoing_;
  std::vector<int> order_;
};

/// Same as the constructor; kept as a free function to mirror the other operations.
Arborescence validate_arborescence(int node_count, std::vector<Edge> edges);

/// n x (n-1) incidence matrix: +1 at the head, -1 at the tail of each edge column.
IntMatrix incidence_matrix(const Arborescence& g);

/// Sorted node set of the sub-tree hanging below edge j (contains the edge's head, never the root).
std::vector<int> head_component(const Arborescence& g, int j);

/// Complement of head_component: the part of the tree still attached to the root.
std::vector<int> tail_component(const Arborescence& g, int j);

/// (n-1) x n {0,1} matrix with H(i, v) = 1 iff v lies in the head component of edge i.
/// Satisfies H * D = I exactly.
IntMatrix left_inverse(const Arborescence& g);

/// L_w = D diag(weights) D^T.
Eigen::MatrixXd weighted_graph_laplacian(const IntMatrix& incidence, const Eigen::VectorXd& edge_weights);

/// L_e = D^T diag(weights) D. Weights must be strictly positive.
Eigen::MatrixXd node_weighted_edge_laplacian(const IntMatrix& incidence, const Eigen::VectorXd& node_weights);

} // namespace sar
