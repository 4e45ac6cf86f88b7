#include "sar/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sar {

Eigen::Matrix<double, 2, Eigen::Dynamic> constraint_jacobian(const SarModel& model, const SystemState& state, int j)
{
  check_dimensions(model, state);
  if (j < 0 || j >= model.edge_count())
    throw InvalidArgument("edge index " + std::to_string(j + 1) + " out of range");
  const Eigen::VectorXd d = model.incidence_real().col(j);
  const Eigen::Vector2d r = state.q.transpose() * d;
  return r * d.transpose();
}

Eigen::MatrixXd multiplier_matrix(const SarModel& model, const PlanarMatrix& qe)
{
  return model.edge_laplacian().cwiseProduct(qe * qe.transpose());
}

Eigen::VectorXd multiplier_rhs(const SarModel& model, const EdgeState& edges, const PlanarMatrix& force)
{
  const PlanarMatrix driven =
    model.incidence_real().transpose() * (model.inverse_masses().asDiagonal() * force);
  return driven.cwiseProduct(edges.qe).rowwise().sum() + edges.qedot.rowwise().squaredNorm();
}

Eigen::VectorXd solve_lambda(const SarModel& model, const SystemState& state, const PlanarMatrix& force)
{
  check_dimensions(model, state);
  if (force.rows() != model.node_count())
    throw DimensionMismatch("force matrix has " + std::to_string(force.rows()) + " rows, expected " +
                            std::to_string(model.node_count()));
  if (model.edge_count() == 0)
    return Eigen::VectorXd();

  const EdgeState edges = edge_state(model, state);
  const Eigen::LLT<Eigen::MatrixXd> llt(multiplier_matrix(model, edges.qe));
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("multiplier matrix J is not positive definite (state far off the constraint manifold)");
  return llt.solve(multiplier_rhs(model, edges, force));
}

PlanarMatrix constraint_forces(const SarModel& model, const SystemState& state, const Eigen::VectorXd& lambda)
{
  check_dimensions(model, state);
  if (lambda.size() != model.edge_count())
    throw DimensionMismatch("lambda has length " + std::to_string(lambda.size()) + ", expected " +
                            std::to_string(model.edge_count()));
  const auto& d = model.incidence_real();
  return d * (lambda.asDiagonal() * (d.transpose() * state.q));
}

PlanarMatrix node_accelerations(const SarModel& model, const SystemState& state, const PlanarMatrix& force,
                                Eigen::VectorXd& lambda)
{
  lambda = solve_lambda(model, state, force);
  const PlanarMatrix gamma = constraint_forces(model, state, lambda);
  PlanarMatrix acc = model.inverse_masses().asDiagonal() * (force - gamma);
  acc.col(1).array() -= model.gravity();
  return acc;
}

PlanarMatrix node_accelerations(const SarModel& model, const SystemState& state, const PlanarMatrix& force)
{
  Eigen::VectorXd lambda;
  return node_accelerations(model, state, force, lambda);
}

PlanarMatrix edge_accelerations(const SarModel& model, const SystemState& state, const PlanarMatrix& force)
{
  const Eigen::VectorXd lambda = solve_lambda(model, state, force);
  const EdgeState edges = edge_state(model, state);
  const auto dt = model.incidence_real().transpose();
  return -model.edge_laplacian() * (lambda.asDiagonal() * edges.qe) +
         dt * (model.inverse_masses().asDiagonal() * force);
}

SystemState project_to_manifold(const SarModel& model, const SystemState& state)
{
  EdgeState edges = edge_state(model, state);
  for (int j = 0; j < model.edge_count(); ++j) {
    const Eigen::Vector2d unit = edges.qe.row(j).transpose().normalized();
    edges.qe.row(j) = model.lengths()[j] * unit.transpose();
    const Eigen::Vector2d v = edges.qedot.row(j).transpose();
    edges.qedot.row(j) = (v - v.dot(unit) * unit).transpose();
  }
  const double inf = std::numeric_limits<double>::infinity();
  return assemble_state_from_edges(model, state.q.row(0).transpose(), state.qdot.row(0).transpose(), edges.qe,
                                   edges.qedot, state.t, inf, inf);
}

namespace {

struct Derivative
{
  PlanarMatrix velocity;
  PlanarMatrix acceleration;
};

Derivative evaluate(const SarModel& model, const ForceLaw& law, const SystemState& s)
{
  Eigen::VectorXd lambda;
  return {s.qdot, node_accelerations(model, s, law(s.t, s), lambda)};
}

SystemState advance(const SystemState& s, const Derivative& k, double h)
{
  return {s.t + h, s.q + h * k.velocity, s.qdot + h * k.acceleration};
}

TraceSample record(const SarModel& model, const ForceLaw& law, const SystemState& s)
{
  TraceSample sample{s, law(s.t, s), {}};
  sample.lambda = solve_lambda(model, s, sample.force);
  return sample;
}

} // namespace

SimTrace integrate(const SarModel& model, const SystemState& initial, const ForceLaw& force_law, double t_end,
                   const IntegratorOptions& options)
{
  if (!(options.dt > 0.0) || !std::isfinite(options.dt))
    throw InvalidArgument("time step must be positive");
  if (!(t_end >= initial.t))
    throw InvalidArgument("end time precedes the initial time");
  if (options.sample_every < 1)
    throw InvalidArgument("sample_every must be at least 1");
  validate_state(model, initial, options.position_tol, options.velocity_tol);

  const double span = t_end - initial.t;
  // Step count rounds to the nearest whole step when the span is a multiple of dt up to rounding.
  long steps = static_cast<long>(std::llround(span / options.dt));
  if (std::abs(steps * options.dt - span) > 1e-9 * std::max(1.0, span))
    steps = static_cast<long>(std::ceil(span / options.dt));

  SimTrace trace;
  trace.samples.reserve(static_cast<std::size_t>(steps / options.sample_every + 2));
  SystemState s = initial;
  double now = s.t;
  try {
    trace.samples.push_back(record(model, force_law, s));
    for (long k = 1; k <= steps; ++k) {
      const double t_next = (k == steps) ? t_end : initial.t + static_cast<double>(k) * options.dt;
      const double h = t_next - s.t;
      now = s.t;
      const Derivative k1 = evaluate(model, force_law, s);
      const Derivative k2 = evaluate(model, force_law, advance(s, k1, 0.5 * h));
      const Derivative k3 = evaluate(model, force_law, advance(s, k2, 0.5 * h));
      const Derivative k4 = evaluate(model, force_law, advance(s, k3, h));
      s.q += (h / 6.0) * (k1.velocity + 2.0 * k2.velocity + 2.0 * k3.velocity + k4.velocity);
      s.qdot += (h / 6.0) * (k1.acceleration + 2.0 * k2.acceleration + 2.0 * k3.acceleration + k4.acceleration);
      s.t = t_next;
      now = s.t;
      if (!s.q.allFinite() || !s.qdot.allFinite())
        throw NonFiniteState("non-finite state at t = " + std::to_string(s.t), s.t);
      if (options.project)
        s = project_to_manifold(model, s);
      if (k % options.sample_every == 0 || k == steps)
        trace.samples.push_back(record(model, force_law, s));
    }
  } catch (const NotPositiveDefinite& e) {
    throw NotPositiveDefinite(std::string(e.what()) + " at t = " + std::to_string(now), now);
  }
  return trace;
}

ForceLaw zero_force()
{
  return [](double, const SystemState& s) { return PlanarMatrix::Zero(s.q.rows(), 2).eval(); };
}

} // namespace sar
