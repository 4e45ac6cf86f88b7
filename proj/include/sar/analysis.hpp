#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "sar/control.hpp"
#include "sar/dynamics.hpp"
#include "sar/model.hpp"

namespace sar {

struct DiagnosticsRow
{
  double t = 0.0;
  /// max_j | |r_ej| - l_j |  (m)
  double constraint_drift = 0.0;
  /// max_j |rdot_ej . r_ej|  (m^2/s)
  double velocity_residual_max = 0.0;
  /// Per-edge |e_c,j| and |e_v,j|; empty without a setpoint.
  std::vector<double> position_error;
  std::vector<double> velocity_error;
  Energy energy;
  /// Smallest eigenvalue of J = L_e (.) Q_e Q_e^T.
  double sigma_min_j = 0.0;
  /// Per-edge |X_j|.
  std::vector<double> residual_x;
  Eigen::VectorXd lambda;
};

/// X_j = -Q_e^T Lambda L_e e_j, the coupling term in the edge error dynamics.
Eigen::Vector2d residual_vector(const SarModel& model, const SystemState& state, const Eigen::VectorXd& lambda, int j);

/// Smallest eigenvalue of the multiplier matrix J at `state`.
double smallest_eigenvalue_j(const SarModel& model, const SystemState& state);

struct BoundTerms
{
  double sigma_min_j = 0.0;
  /// Tr(Qedot Qedot^T); equals sum_j |e_v,j|^2 for a constant setpoint.
  double sum_ev_sq = 0.0;
  double max_x_norm = 0.0;
};

/// Measurable quantities of the residual bound. Throws NotPositiveDefinite if sigma_min_j <= 0.
BoundTerms bound_terms(const SarModel& model, const SystemState& state, const Eigen::VectorXd& lambda);

/**
 * Rate of the edge velocity error predicted by the closed-loop error dynamics:
 * -kc P e_c - kv P e_v + X_j, plus P rddot_d when feedforward is on, minus rddot_d.
 */
Eigen::Vector2d predicted_velocity_error_rate(const SarModel& model, const ControllerConfig& config,
                                              const SetpointSample& desired, const SystemState& state,
                                              const Eigen::VectorXd& lambda, int j);

DiagnosticsRow diagnose(const SarModel& model, const TraceSample& sample, const EdgeSetpoint* setpoint = nullptr);

std::vector<DiagnosticsRow> diagnose(const SarModel& model, const SimTrace& trace,
                                     const EdgeSetpoint* setpoint = nullptr);

inline constexpr double kSettlingThreshold = 1e-2;

struct Summary
{
  std::size_t samples = 0;
  double t_start = 0.0;
  double t_end = 0.0;
  double max_constraint_drift = 0.0;
  double mean_constraint_drift = 0.0;
  double max_velocity_residual = 0.0;
  std::vector<double> final_position_error;
  std::vector<double> final_velocity_error;
  /// First time after which every |e_c,j| stays at or below the threshold.
  std::optional<double> settling_time;
  /// max_t |E(t) - E(0)| / |E(0)|; only for unforced runs.
  std::optional<double> energy_drift;
  double sigma_min_j_initial = 0.0;
  double sigma_min_j_min = 0.0;
  double sigma_min_j_min_time = 0.0;
};

/// Throws InvalidArgument on an empty trace.
Summary summarize(const std::vector<DiagnosticsRow>& rows, bool unforced,
                  double settling_threshold = kSettlingThreshold);

} // namespace sar
