#include "sar/model.hpp"

#include <cmath>
#include <string>

namespace sar {

SarModel::SarModel(Arborescence graph, Eigen::VectorXd masses, Eigen::VectorXd lengths, double gravity)
  : graph_(std::move(graph)), masses_(std::move(masses)), lengths_(std::move(lengths)), gravity_(gravity)
{
  if (masses_.size() != graph_.node_count())
    throw DimensionMismatch("expected " + std::to_string(graph_.node_count()) + " masses, got " +
                            std::to_string(masses_.size()));
  if (lengths_.size() != graph_.edge_count())
    throw DimensionMismatch("expected " + std::to_string(graph_.edge_count()) + " rod lengths, got " +
                            std::to_string(lengths_.size()));
  for (Eigen::Index i = 0; i < masses_.size(); ++i)
    if (!(masses_[i] > 0.0) || !std::isfinite(masses_[i]))
      throw InvalidArgument("mass of node " + std::to_string(i + 1) + " must be positive");
  for (Eigen::Index j = 0; j < lengths_.size(); ++j)
    if (!(lengths_[j] > 0.0) || !std::isfinite(lengths_[j]))
      throw InvalidArgument("length of edge " + std::to_string(j + 1) + " must be positive");
  if (!std::isfinite(gravity_))
    throw InvalidArgument("gravity must be finite");

  incidence_ = incidence_matrix(graph_);
  left_inverse_ = sar::left_inverse(graph_);
  incidence_real_ = incidence_.cast<double>();
  inverse_masses_ = masses_.cwiseInverse();
  edge_laplacian_ = node_weighted_edge_laplacian(incidence_, inverse_masses_);
}

PlanarMatrix SarModel::gravity_matrix() const
{
  PlanarMatrix g(node_count(), 2);
  g.col(0).setZero();
  g.col(1).setConstant(gravity_);
  return g;
}

void check_dimensions(const SarModel& model, const SystemState& state)
{
  if (state.q.rows() != model.node_count() || state.qdot.rows() != model.node_count())
    throw DimensionMismatch("state has " + std::to_string(state.q.rows()) + " position rows and " +
                            std::to_string(state.qdot.rows()) + " velocity rows, model has " +
                            std::to_string(model.node_count()) + " nodes");
}

EdgeState edge_state(const SarModel& model, const SystemState& state)
{
  check_dimensions(model, state);
  const auto dt = model.incidence_real().transpose();
  return {dt * state.q, dt * state.qdot};
}

namespace {

Eigen::Vector2d edge_vector(const SarModel& model, const PlanarMatrix& m, int j)
{
  const Edge& e = model.graph().edge(j);
  return (m.row(e.head) - m.row(e.tail)).transpose();
}

void check_edge_index(const SarModel& model, int j)
{
  if (j < 0 || j >= model.edge_count())
    throw InvalidArgument("edge index " + std::to_string(j + 1) + " out of range 1.." +
                          std::to_string(model.edge_count()));
}

} // namespace

double holonomic_residual(const SarModel& model, const SystemState& state, int j)
{
  check_dimensions(model, state);
  check_edge_index(model, j);
  const double l = model.lengths()[j];
  return 0.5 * edge_vector(model, state.q, j).squaredNorm() - 0.5 * l * l;
}

double velocity_residual(const SarModel& model, const SystemState& state, int j)
{
  check_dimensions(model, state);
  check_edge_index(model, j);
  return edge_vector(model, state.qdot, j).dot(edge_vector(model, state.q, j));
}

void validate_state(const SarModel& model, const SystemState& state, double position_tol, double velocity_tol)
{
  check_dimensions(model, state);
  if (!state.q.allFinite() || !state.qdot.allFinite())
    throw ConstraintViolation("state contains non-finite entries");
  for (int j = 0; j < model.edge_count(); ++j) {
    const double h = holonomic_residual(model, state, j);
    if (std::abs(h) > position_tol)
      throw ConstraintViolation("rod length constraint of edge " + std::to_string(j + 1) + " violated: |h| = " +
                                std::to_string(std::abs(h)));
    const double v = velocity_residual(model, state, j);
    if (std::abs(v) > velocity_tol)
      throw ConstraintViolation("velocity constraint of edge " + std::to_string(j + 1) +
                                " violated: |rdot . r| = " + std::to_string(std::abs(v)));
  }
}

SystemState assemble_state_from_edges(const SarModel& model, const Eigen::Vector2d& root_position,
                                      const Eigen::Vector2d& root_velocity, const PlanarMatrix& qe,
                                      const PlanarMatrix& qedot, double t, double position_tol,
                                      double velocity_tol)
{
  const int m = model.edge_count();
  if (qe.rows() != m || qedot.rows() != m)
    throw DimensionMismatch("edge matrices must have " + std::to_string(m) + " rows");
  for (int j = 0; j < m; ++j) {
    const double l = model.lengths()[j];
    const double h = 0.5 * qe.row(j).squaredNorm() - 0.5 * l * l;
    if (!(std::abs(h) <= position_tol))
      throw ConstraintViolation("edge " + std::to_string(j + 1) + " has length " +
                                std::to_string(qe.row(j).norm()) + ", rod length is " + std::to_string(l));
    const double v = qe.row(j).dot(qedot.row(j));
    if (!(std::abs(v) <= velocity_tol))
      throw ConstraintViolation("edge " + std::to_string(j + 1) + " velocity has a radial component " +
                                std::to_string(v));
  }

  SystemState s;
  s.t = t;
  s.q.resize(model.node_count(), 2);
  s.qdot.resize(model.node_count(), 2);
  s.q.row(0) = root_position.transpose();
  s.qdot.row(0) = root_velocity.transpose();
  const auto& g = model.graph();
  for (int v : g.topological_order()) {
    const int j = g.incoming_edge(v);
    if (j < 0)
      continue;
    s.q.row(v) = s.q.row(g.parent(v)) + qe.row(j);
    s.qdot.row(v) = s.qdot.row(g.parent(v)) + qedot.row(j);
  }
  return s;
}

Energy kinetic_and_potential_energy(const SarModel& model, const SystemState& state)
{
  check_dimensions(model, state);
  Energy e;
  e.kinetic = 0.5 * model.masses().dot(state.qdot.rowwise().squaredNorm());
  e.potential = model.gravity() * model.masses().dot(state.q.col(1));
  return e;
}

} // namespace sar
