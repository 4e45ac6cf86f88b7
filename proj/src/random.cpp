#include "sar/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace sar::random {

double uniform(Rng& rng, double lo, double hi)
{
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Arborescence random_tree(Rng& rng, int node_count)
{
  if (node_count < 1)
    throw InvalidArgument("random_tree: node_count must be >= 1");
  std::vector<int> label(static_cast<std::size_t>(node_count));
  std::iota(label.begin(), label.end(), 0);
  std::shuffle(label.begin() + 1, label.end(), rng);

  std::vector<Edge> edges;
  for (int k = 1; k < node_count; ++k) {
    const int parent = std::uniform_int_distribution<int>(0, k - 1)(rng);
    edges.push_back({label[static_cast<std::size_t>(parent)], label[static_cast<std::size_t>(k)]});
  }
  std::shuffle(edges.begin(), edges.end(), rng);
  return Arborescence(node_count, std::move(edges));
}

SarModel random_model(Rng& rng, int node_count)
{
  Arborescence g = random_tree(rng, node_count);
  Eigen::VectorXd m(node_count), l(std::max(node_count - 1, 0));
  for (int i = 0; i < node_count; ++i)
    m(i) = uniform(rng, 0.1, 2.0);
  for (int j = 0; j < l.size(); ++j)
    l(j) = uniform(rng, 0.1, 1.0);
  return SarModel(std::move(g), m, l);
}

SystemState random_state(Rng& rng, const SarModel& model, double rate_scale)
{
  const int m = model.edge_count();
  PlanarMatrix qe(m, 2), qedot(m, 2);
  for (int j = 0; j < m; ++j) {
    const double a = uniform(rng, -std::numbers::pi, std::numbers::pi);
    const double w = uniform(rng, -rate_scale, rate_scale);
    const double l = model.lengths()(j);
    qe.row(j) << l * std::cos(a), l * std::sin(a);
    qedot.row(j) << -w * l * std::sin(a), w * l * std::cos(a);
  }
  const Eigen::Vector2d p(uniform(rng, -1, 1), uniform(rng, -1, 1));
  const Eigen::Vector2d v(uniform(rng, -1, 1), uniform(rng, -1, 1));
  return assemble_state_from_edges(model, p, v, qe, qedot, uniform(rng, 0.0, 10.0));
}

PlanarMatrix random_forces(Rng& rng, int node_count, double scale)
{
  PlanarMatrix f(node_count, 2);
  for (int i = 0; i < node_count; ++i)
    f.row(i) << uniform(rng, -scale, scale), uniform(rng, -scale, scale);
  return f;
}

PlanarMatrix random_orthogonal_inputs(Rng& rng, const PlanarMatrix& qe, double scale)
{
  PlanarMatrix u(qe.rows(), 2);
  for (Eigen::Index j = 0; j < qe.rows(); ++j) {
    const double s = uniform(rng, -scale, scale) / qe.row(j).norm();
    u.row(j) << -s * qe(j, 1), s * qe(j, 0);
  }
  return u;
}

} // namespace sar::random
