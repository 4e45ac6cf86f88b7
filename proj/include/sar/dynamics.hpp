#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "sar/model.hpp"

namespace sar {

/// (t, state) -> per-node force matrix F (n x 2, newtons).
using ForceLaw = std::function<PlanarMatrix(double, const SystemState&)>;

/// A_j(Q) = Q^T d_j d_j^T, the 2 x n Jacobian of the j-th rod constraint.
Eigen::Matrix<double, 2, Eigen::Dynamic> constraint_jacobian(const SarModel& model, const SystemState& state, int j);

/// J = L_e (.) Q_e Q_e^T.
Eigen::MatrixXd multiplier_matrix(const SarModel& model, const PlanarMatrix& qe);

/// b = diagV(D^T M^-1 F Q_e^T + Qedot Qedot^T).
Eigen::VectorXd multiplier_rhs(const SarModel& model, const EdgeState& edges, const PlanarMatrix& force);

/// Solves J lambda = b by Cholesky. Throws NotPositiveDefinite if J does not factor.
Eigen::VectorXd solve_lambda(const SarModel& model, const SystemState& state, const PlanarMatrix& force);

/// Gamma = D diag(lambda) D^T Q.
PlanarMatrix constraint_forces(const SarModel& model, const SystemState& state, const Eigen::VectorXd& lambda);

/// Qddot = -M^-1 Gamma + M^-1 F - G with lambda from solve_lambda.
PlanarMatrix node_accelerations(const SarModel& model, const SystemState& state, const PlanarMatrix& force);

/// Same, also returning the multipliers used.
PlanarMatrix node_accelerations(const SarModel& model, const SystemState& state, const PlanarMatrix& force,
                                Eigen::VectorXd& lambda);

/// Qeddot = -L_e Lambda Q_e + D^T M^-1 F.
PlanarMatrix edge_accelerations(const SarModel& model, const SystemState& state, const PlanarMatrix& force);

/// Re-imposes rod lengths and removes radial edge velocities, keeping the root row.
SystemState project_to_manifold(const SarModel& model, const SystemState& state);

struct TraceSample
{
  SystemState state;
  PlanarMatrix force;
  Eigen::VectorXd lambda;
};

struct SimTrace
{
  std::vector<TraceSample> samples;
};

struct IntegratorOptions
{
  double dt = 1e-3;
  /// Per-step projection back onto the constraint manifold.
  bool project = false;
  /// Record every k-th step (the first and last states are always recorded).
  int sample_every = 1;
  /// Tolerances used to validate the initial state.
  double position_tol = kPositionTolerance;
  double velocity_tol = kVelocityTolerance;
};

/**
 * Classical fixed-step RK4 on (Q, Qdot). The force law is evaluated at every
 * sub-stage time and state. Throws NotPositiveDefinite or NonFiniteState with
 * the failing time stamp.
 */
SimTrace integrate(const SarModel& model, const SystemState& initial, const ForceLaw& force_law, double t_end,
                   const IntegratorOptions& options = {});

/// Force law returning zeros.
ForceLaw zero_force();

} // namespace sar
