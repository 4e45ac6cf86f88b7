#include "sar/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sar {

Eigen::Vector2d residual_vector(const SarModel& model, const SystemState& state, const Eigen::VectorXd& lambda, int j)
{
  if (j < 0 || j >= model.edge_count())
    throw InvalidArgument("edge index " + std::to_string(j + 1) + " out of range");
  if (lambda.size() != model.edge_count())
    throw DimensionMismatch("lambda has the wrong length");
  const EdgeState edges = edge_state(model, state);
  return -(edges.qe.transpose() * (lambda.asDiagonal() * model.edge_laplacian().col(j)));
}

double smallest_eigenvalue_j(const SarModel& model, const SystemState& state)
{
  if (model.edge_count() == 0)
    return std::numeric_limits<double>::infinity();
  const EdgeState edges = edge_state(model, state);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(multiplier_matrix(model, edges.qe),
                                                           Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

BoundTerms bound_terms(const SarModel& model, const SystemState& state, const Eigen::VectorXd& lambda)
{
  BoundTerms b;
  b.sigma_min_j = smallest_eigenvalue_j(model, state);
  if (!(b.sigma_min_j > 0.0))
    throw NotPositiveDefinite("smallest eigenvalue of J is " + std::to_string(b.sigma_min_j));
  b.sum_ev_sq = edge_state(model, state).qedot.squaredNorm();
  for (int j = 0; j < model.edge_count(); ++j)
    b.max_x_norm = std::max(b.max_x_norm, residual_vector(model, state, lambda, j).norm());
  return b;
}

Eigen::Vector2d predicted_velocity_error_rate(const SarModel& model, const ControllerConfig& config,
                                              const SetpointSample& desired, const SystemState& state,
                                              const Eigen::VectorXd& lambda, int j)
{
  const EdgeState edges = edge_state(model, state);
  const Eigen::Vector2d r = edges.qe.row(j).transpose();
  const Eigen::Matrix2d p = projection(r);
  const Eigen::Vector2d ec = r - desired.position.row(j).transpose();
  const Eigen::Vector2d ev = (edges.qedot.row(j) - desired.velocity.row(j)).transpose();
  const Eigen::Vector2d acc_d = desired.acceleration.row(j).transpose();
  Eigen::Vector2d rate = -config.kc_for(j) * p * ec - config.kv_for(j) * p * ev +
                         residual_vector(model, state, lambda, j) - acc_d;
  if (config.feedforward)
    rate += p * acc_d;
  return rate;
}

DiagnosticsRow diagnose(const SarModel& model, const TraceSample& sample, const EdgeSetpoint* setpoint)
{
  const SystemState& s = sample.state;
  const EdgeState edges = edge_state(model, s);
  const int m = model.edge_count();

  DiagnosticsRow row;
  row.t = s.t;
  row.lambda = sample.lambda;
  row.energy = kinetic_and_potential_energy(model, s);
  row.sigma_min_j = m == 0 ? 0.0 : smallest_eigenvalue_j(model, s);
  if (setpoint) {
    const SetpointSample desired = (*setpoint)(s.t);
    row.position_error.resize(static_cast<std::size_t>(m));
    row.velocity_error.resize(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
      row.position_error[static_cast<std::size_t>(j)] = (edges.qe.row(j) - desired.position.row(j)).norm();
      row.velocity_error[static_cast<std::size_t>(j)] = (edges.qedot.row(j) - desired.velocity.row(j)).norm();
    }
  }
  row.residual_x.resize(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    row.constraint_drift = std::max(row.constraint_drift, std::abs(edges.qe.row(j).norm() - model.lengths()[j]));
    row.velocity_residual_max =
      std::max(row.velocity_residual_max, std::abs(edges.qe.row(j).dot(edges.qedot.row(j))));
    row.residual_x[static_cast<std::size_t>(j)] = residual_vector(model, s, sample.lambda, j).norm();
  }
  return row;
}

std::vector<DiagnosticsRow> diagnose(const SarModel& model, const SimTrace& trace, const EdgeSetpoint* setpoint)
{
  std::vector<DiagnosticsRow> rows;
  rows.reserve(trace.samples.size());
  for (const auto& sample : trace.samples)
    rows.push_back(diagnose(model, sample, setpoint));
  return rows;
}

Summary summarize(const std::vector<DiagnosticsRow>& rows, bool unforced, double settling_threshold)
{
  if (rows.empty())
    throw InvalidArgument("cannot summarize an empty trace");
  Summary s;
  s.samples = rows.size();
  s.t_start = rows.front().t;
  s.t_end = rows.back().t;
  s.final_position_error = rows.back().position_error;
  s.final_velocity_error = rows.back().velocity_error;
  s.sigma_min_j_initial = rows.front().sigma_min_j;
  s.sigma_min_j_min = rows.front().sigma_min_j;
  s.sigma_min_j_min_time = rows.front().t;

  const double e0 = rows.front().energy.total();
  const double scale = std::abs(e0) > 0.0 ? std::abs(e0) : 1.0;
  double energy_drift = 0.0;
  double drift_sum = 0.0;
  for (const auto& r : rows) {
    s.max_constraint_drift = std::max(s.max_constraint_drift, r.constraint_drift);
    s.max_velocity_residual = std::max(s.max_velocity_residual, r.velocity_residual_max);
    drift_sum += r.constraint_drift;
    energy_drift = std::max(energy_drift, std::abs(r.energy.total() - e0) / scale);
    if (r.sigma_min_j < s.sigma_min_j_min) {
      s.sigma_min_j_min = r.sigma_min_j;
      s.sigma_min_j_min_time = r.t;
    }
  }
  s.mean_constraint_drift = drift_sum / static_cast<double>(rows.size());
  if (unforced)
    s.energy_drift = energy_drift;

  // Walk backwards to the last sample above threshold; settling needs at least two samples.
  if (rows.size() >= 2 && !rows.front().position_error.empty()) {
    auto above = [&](const DiagnosticsRow& r) {
      return std::any_of(r.position_error.begin(), r.position_error.end(),
                         [&](double e) { return e > settling_threshold; });
    };
    const auto last_bad = std::find_if(rows.rbegin(), rows.rend(), above);
    if (last_bad == rows.rend())
      s.settling_time = rows.front().t;
    else if (last_bad != rows.rbegin())
      s.settling_time = (last_bad - 1)->t;
  }
  return s;
}

} // namespace sar
