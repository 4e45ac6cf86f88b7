#include "sar/control.hpp"

#include <cmath>
#include <memory>
#include <string>

namespace sar {

double Sinusoid::operator()(double t) const
{
  return amplitude * std::cos(angular_frequency * t + phase);
}

double ControllerConfig::kc_for(int j) const
{
  return kc_edges.empty() ? kc : kc_edges.at(static_cast<std::size_t>(j));
}

double ControllerConfig::kv_for(int j) const
{
  return kv_edges.empty() ? kv : kv_edges.at(static_cast<std::size_t>(j));
}

void ControllerConfig::validate(int edge_count) const
{
  auto check = [](double k, const char* name) {
    if (!(k > 0.0) || !std::isfinite(k))
      throw InvalidArgument(std::string(name) + " must be positive");
  };
  check(kc, "kc");
  check(kv, "kv");
  for (const auto* gains : {&kc_edges, &kv_edges}) {
    if (!gains->empty() && static_cast<int>(gains->size()) != edge_count)
      throw InvalidArgument("per-edge gains need " + std::to_string(edge_count) + " entries");
    for (double k : *gains)
      check(k, "per-edge gain");
  }
}

EdgeSetpoint EdgeSetpoint::constant(PlanarMatrix rows)
{
  auto shared = std::make_shared<const PlanarMatrix>(std::move(rows));
  return EdgeSetpoint([shared](double) {
    return SetpointSample{*shared, PlanarMatrix::Zero(shared->rows(), 2), PlanarMatrix::Zero(shared->rows(), 2)};
  });
}

EdgeSetpoint EdgeSetpoint::flapping(const Eigen::VectorXd& lengths, double amplitude, double frequency, double offset)
{
  if (lengths.size() != 5)
    throw DimensionMismatch("flapping setpoint is defined for exactly 5 edges, model has " +
                            std::to_string(lengths.size()));
  // Sign of the cos / sin component of each row.
  static constexpr double sx[5] = {-1.0, 1.0, 0.0, -1.0, 1.0};
  static constexpr double sy[5] = {-1.0, -1.0, 0.0, 1.0, 1.0};
  return EdgeSetpoint([lengths, amplitude, frequency, offset](double t) {
    const double theta = amplitude * std::cos(frequency * t) + offset;
    const double theta_dot = -amplitude * frequency * std::sin(frequency * t);
    const double theta_ddot = -amplitude * frequency * frequency * std::cos(frequency * t);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    SetpointSample out{PlanarMatrix(5, 2), PlanarMatrix(5, 2), PlanarMatrix(5, 2)};
    for (int j = 0; j < 5; ++j) {
      const double l = lengths[j];
      out.position.row(j) << sx[j] * l * c, sy[j] * l * s;
      out.velocity.row(j) << -sx[j] * l * s * theta_dot, sy[j] * l * c * theta_dot;
      out.acceleration.row(j) << -sx[j] * l * (c * theta_dot * theta_dot + s * theta_ddot),
        sy[j] * l * (c * theta_ddot - s * theta_dot * theta_dot);
    }
    // The centre link points straight up.
    out.position.row(2) << 0.0, lengths[2];
    return out;
  });
}

Eigen::Matrix2d projection(const Eigen::Vector2d& r)
{
  const double norm_sq = r.squaredNorm();
  if (!(norm_sq > 0.0))
    throw InvalidArgument("cannot project against a zero-length edge");
  return Eigen::Matrix2d::Identity() - r * r.transpose() / norm_sq;
}

Eigen::Vector2d edge_control(const ControllerConfig& config, const SetpointSample& desired, const EdgeState& edges,
                             int j)
{
  if (j < 0 || j >= edges.qe.rows())
    throw InvalidArgument("edge index " + std::to_string(j + 1) + " out of range");
  const Eigen::Vector2d r = edges.qe.row(j).transpose();
  const Eigen::Vector2d position_error = r - desired.position.row(j).transpose();
  const Eigen::Vector2d velocity_error = (edges.qedot.row(j) - desired.velocity.row(j)).transpose();
  Eigen::Vector2d command = -config.kc_for(j) * position_error - config.kv_for(j) * velocity_error;
  if (config.feedforward)
    command += desired.acceleration.row(j).transpose();
  return projection(r) * command;
}

Eigen::Vector2d edge_control(const ControllerConfig& config, const EdgeSetpoint& setpoint, const EdgeState& edges,
                             int j, double t)
{
  return edge_control(config, setpoint(t), edges, j);
}

PlanarMatrix edge_inputs(const ControllerConfig& config, const SetpointSample& desired, const EdgeState& edges)
{
  const auto m = edges.qe.rows();
  if (desired.position.rows() != m || desired.velocity.rows() != m || desired.acceleration.rows() != m)
    throw DimensionMismatch("setpoint has " + std::to_string(desired.position.rows()) + " rows, system has " +
                            std::to_string(m) + " edges");
  PlanarMatrix u(m, 2);
  for (int j = 0; j < m; ++j)
    u.row(j) = edge_control(config, desired, edges, j).transpose();
  return u;
}

PlanarMatrix assemble_forces_structured(const SarModel& model, const ControllerConfig& config, const PlanarMatrix& u,
                                        const PlanarMatrix& qe, double t)
{
  const int m = model.edge_count();
  if (u.rows() != m || qe.rows() != m)
    throw DimensionMismatch("U and Q_e must have " + std::to_string(m) + " rows");
  for (int j = 0; j < m; ++j) {
    const double overlap = u.row(j).dot(qe.row(j));
    if (!(std::abs(overlap) <= kOrthogonalityTolerance))
      throw OrthogonalityViolation("input of edge " + std::to_string(j + 1) + " is not orthogonal to the edge: " +
                                   "u . r = " + std::to_string(overlap));
  }
  const Eigen::Vector2d leader = config.leader(t);
  PlanarMatrix per_mass = model.left_inverse().cast<double>().transpose() * u;
  per_mass.rowwise() += (leader / model.masses()[0]).transpose();
  per_mass.col(1).array() += model.gravity();
  return model.masses().asDiagonal() * per_mass;
}

FollowerForce follower_force_recursive(const SarModel& model, int node, const Eigen::Vector2d& parent_bar_force,
                                       const Eigen::Vector2d& u)
{
  const int parent = model.graph().parent(node);
  if (parent < 0)
    throw InvalidArgument("the root node is the leader, not a follower");
  const double m = model.masses()[node];
  FollowerForce out;
  out.bar_force = m * (parent_bar_force / model.masses()[parent] + u);
  out.force = out.bar_force + Eigen::Vector2d(0.0, m * model.gravity());
  return out;
}

PlanarMatrix assemble_forces_recursive(const SarModel& model, const ControllerConfig& config, const PlanarMatrix& u,
                                       double t)
{
  const auto& g = model.graph();
  if (u.rows() != g.edge_count())
    throw DimensionMismatch("U must have " + std::to_string(g.edge_count()) + " rows");
  PlanarMatrix force(g.node_count(), 2);
  PlanarMatrix bar(g.node_count(), 2);
  const Eigen::Vector2d leader = config.leader(t);
  bar.row(0) = leader.transpose();
  force.row(0) = (leader + Eigen::Vector2d(0.0, model.masses()[0] * model.gravity())).transpose();
  for (int v : g.topological_order()) {
    const int j = g.incoming_edge(v);
    if (j < 0)
      continue;
    const FollowerForce f =
      follower_force_recursive(model, v, bar.row(g.parent(v)).transpose(), u.row(j).transpose());
    bar.row(v) = f.bar_force.transpose();
    force.row(v) = f.force.transpose();
  }
  return force;
}

ForceLaw closed_loop_force_law(const SarModel& model, const ControllerConfig& config, const EdgeSetpoint& setpoint)
{
  config.validate(model.edge_count());
  auto shared = std::make_shared<const SarModel>(model);
  return [shared, config, setpoint](double t, const SystemState& s) {
    const EdgeState edges = edge_state(*shared, s);
    const PlanarMatrix u = edge_inputs(config, setpoint(t), edges);
    return assemble_forces_recursive(*shared, config, u, t);
  };
}

} // namespace sar
