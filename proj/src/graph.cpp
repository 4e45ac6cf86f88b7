#include "sar/graph.hpp"

#include <algorithm>
#include <deque>
#include <string>

namespace sar {

namespace {

std::string edge_name(const Edge& e)
{
  // 1-based, as users write them in configs.
  return "(" + std::to_string(e.tail + 1) + ", " + std::to_string(e.head + 1) + ")";
}

} // namespace

Arborescence::Arborescence(int node_count, std::vector<Edge> edges)
  : node_count_(node_count), edges_(std::move(edges))
{
  using K = GraphError::Kind;
  if (node_count_ < 1)
    throw GraphError(K::WrongEdgeCount, "arborescence needs at least one node");

  const auto n = static_cast<std::size_t>(node_count_);
  parent_.assign(n, -1);
  incoming_edge_.assign(n, -1);
  outgoing_.assign(n, {});

  for (std::size_t j = 0; j < edges_.size(); ++j) {
    const Edge& e = edges_[j];
    if (e.tail < 0 || e.tail >= node_count_ || e.head < 0 || e.head >= node_count_)
      throw GraphError(K::IndexOutOfRange, "edge " + std::to_string(j + 1) + " " + edge_name(e) +
                                             " references a node outside 1.." + std::to_string(node_count_));
  }

  for (std::size_t j = 0; j < edges_.size(); ++j) {
    const Edge& e = edges_[j];
    auto& in = incoming_edge_[static_cast<std::size_t>(e.head)];
    if (in >= 0)
      throw GraphError(K::MultipleParents,
                       "node " + std::to_string(e.head + 1) + " is the head of edges " + std::to_string(in + 1) +
                         " and " + std::to_string(j + 1));
    in = static_cast<int>(j);
    parent_[static_cast<std::size_t>(e.head)] = e.tail;
    outgoing_[static_cast<std::size_t>(e.tail)].push_back(static_cast<int>(j));
  }

  // With at most one parent per node, a directed cycle shows up as a parent chain
  // that revisits a node.
  std::vector<int> mark(n, -1);
  for (int start = 0; start < node_count_; ++start) {
    int v = start;
    while (v >= 0 && mark[static_cast<std::size_t>(v)] < 0) {
      mark[static_cast<std::size_t>(v)] = start;
      v = parent_[static_cast<std::size_t>(v)];
    }
    if (v >= 0 && mark[static_cast<std::size_t>(v)] == start)
      throw GraphError(K::CycleDetected, "directed cycle through node " + std::to_string(v + 1));
  }

  if (edges_.size() + 1 != n)
    throw GraphError(K::WrongEdgeCount, "expected " + std::to_string(n - 1) + " edges for " + std::to_string(n) +
                                          " nodes, got " + std::to_string(edges_.size()));

  std::deque<int> queue{0};
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    order_.push_back(v);
    for (int j : outgoing_[static_cast<std::size_t>(v)])
      queue.push_back(edges_[static_cast<std::size_t>(j)].head);
  }
  if (order_.size() != n) {
    std::vector<bool> seen(n, false);
    for (int v : order_)
      seen[static_cast<std::size_t>(v)] = true;
    const auto it = std::find(seen.begin(), seen.end(), false);
    throw GraphError(K::Disconnected,
                     "node " + std::to_string(std::distance(seen.begin(), it) + 1) + " is unreachable from root 1");
  }
}

bool Arborescence::is_chain() const
{
  return std::all_of(outgoing_.begin(), outgoing_.end(), [](const auto& out) { return out.size() <= 1; });
}

Arborescence validate_arborescence(int node_count, std::vector<Edge> edges)
{
  return Arborescence(node_count, std::move(edges));
}

IntMatrix incidence_matrix(const Arborescence& g)
{
  IntMatrix d = IntMatrix::Zero(g.node_count(), g.edge_count());
  for (int j = 0; j < g.edge_count(); ++j) {
    d(g.edge(j).head, j) = 1;
    d(g.edge(j).tail, j) = -1;
  }
  return d;
}

std::vector<int> head_component(const Arborescence& g, int j)
{
  if (j < 0 || j >= g.edge_count())
    throw InvalidArgument("edge index " + std::to_string(j + 1) + " out of range 1.." +
                          std::to_string(g.edge_count()));
  std::vector<int> nodes;
  std::vector<int> stack{g.edge(j).head};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    nodes.push_back(v);
    for (int k : g.outgoing_edges(v))
      stack.push_back(g.edge(k).head);
  }
  std::sort(nodes.begin(), nodes.end());
  return nodes;
}

std::vector<int> tail_component(const Arborescence& g, int j)
{
  const auto head = head_component(g, j);
  std::vector<int> tail;
  for (int v = 0; v < g.node_count(); ++v)
    if (!std::binary_search(head.begin(), head.end(), v))
      tail.push_back(v);
  return tail;
}

IntMatrix left_inverse(const Arborescence& g)
{
  IntMatrix h = IntMatrix::Zero(g.edge_count(), g.node_count());
  // Walk each node up to the root; every edge crossed has the node in its head component.
  for (int v = 0; v < g.node_count(); ++v)
    for (int u = v; g.incoming_edge(u) >= 0; u = g.parent(u))
      h(g.incoming_edge(u), v) = 1;
  return h;
}

Eigen::MatrixXd weighted_graph_laplacian(const IntMatrix& incidence, const Eigen::VectorXd& edge_weights)
{
  if (edge_weights.size() != incidence.cols())
    throw DimensionMismatch("edge weight vector has length " + std::to_string(edge_weights.size()) + ", expected " +
                            std::to_string(incidence.cols()));
  const Eigen::MatrixXd d = incidence.cast<double>();
  return d * edge_weights.asDiagonal() * d.transpose();
}

Eigen::MatrixXd node_weighted_edge_laplacian(const IntMatrix& incidence, const Eigen::VectorXd& node_weights)
{
  if (node_weights.size() != incidence.rows())
    throw DimensionMismatch("node weight vector has length " + std::to_string(node_weights.size()) + ", expected " +
                            std::to_string(incidence.rows()));
  if ((node_weights.array() <= 0.0).any())
    throw InvalidArgument("node weights must be strictly positive");
  const Eigen::MatrixXd d = incidence.cast<double>();
  return d.transpose() * node_weights.asDiagonal() * d;
}

} // namespace sar
