#pragma once

#include <Eigen/Dense>

#include "sar/graph.hpp"

namespace sar {

/// Rows are planar vectors (x, y): node coordinates Q, edge coordinates Q_e, forces F.
using PlanarMatrix = Eigen::MatrixX2d;

/// Validation tolerance on |h_j| (m^2) for initial states.
inline constexpr double kPositionTolerance = 1e-9;
/// Validation tolerance on |r_ej . rdot_ej| (m^2/s) for initial states.
inline constexpr double kVelocityTolerance = 1e-9;

inline constexpr double kDefaultGravity = 9.81;

/**
 * Planar point masses joined by massless rods along the edges of an arborescence.
 *
 * Gravity acts along -y: the generalized gravity matrix is G = [0, g 1_n], and
 * accelerations pick up -G.
 */
class SarModel
{
public:
  SarModel(Arborescence graph, Eigen::VectorXd masses, Eigen::VectorXd lengths, double gravity = kDefaultGravity);

  const Arborescence& graph() const noexcept { return graph_; }
  int node_count() const noexcept { return graph_.node_count(); }
  int edge_count() const noexcept { return graph_.edge_count(); }
  const Eigen::VectorXd& masses() const noexcept { return masses_; }
  const Eigen::VectorXd& lengths() const noexcept { return lengths_; }
  double gravity() const noexcept { return gravity_; }

  const IntMatrix& incidence() const noexcept { return incidence_; }
  const IntMatrix& left_inverse() const noexcept { return left_inverse_; }
  /// D as doubles, for numeric expressions.
  const Eigen::MatrixXd& incidence_real() const noexcept { return incidence_real_; }
  /// L_e = D^T M^-1 D, constant for a given model.
  const Eigen::MatrixXd& edge_laplacian() const noexcept { return edge_laplacian_; }
  const Eigen::VectorXd& inverse_masses() const noexcept { return inverse_masses_; }

  /// n x 2 matrix [0, g 1_n].
  PlanarMatrix gravity_matrix() const;

private:
  Arborescence graph_;
  Eigen::VectorXd masses_;
  Eigen::VectorXd lengths_;
  double gravity_;
  IntMatrix incidence_;
  IntMatrix left_inverse_;
  Eigen::MatrixXd incidence_real_;
  Eigen::VectorXd inverse_masses_;
  Eigen::MatrixXd edge_laplacian_;
};

struct SystemState
{
  double t = 0.0;
  PlanarMatrix q;
  PlanarMatrix qdot;
};

struct EdgeState
{
  PlanarMatrix qe;
  PlanarMatrix qedot;
};

struct Energy
{
  double kinetic = 0.0;
  double potential = 0.0;

  double total() const noexcept { return kinetic + potential; }
};

/// Throws DimensionMismatch unless Q and Qdot are n x 2 for this model.
void check_dimensions(const SarModel& model, const SystemState& state);

/// Q_e = D^T Q, Qedot = D^T Qdot.
EdgeState edge_state(const SarModel& model, const SystemState& state);

/// h_j = |Q^T d_j|^2 / 2 - l_j^2 / 2.
double holonomic_residual(const SarModel& model, const SystemState& state, int j);

/// d_j^T Qdot Q^T d_j, i.e. rdot_ej . r_ej.
double velocity_residual(const SarModel& model, const SystemState& state, int j);

/// Throws ConstraintViolation naming the first edge whose residual exceeds the tolerance.
void validate_state(const SarModel& model, const SystemState& state, double position_tol = kPositionTolerance,
                    double velocity_tol = kVelocityTolerance);

/**
 * Builds node coordinates from edge coordinates by summing rods along each
 * root-to-node path. Edge rows must already satisfy the length and
 * orthogonality constraints (checked against the given tolerances).
 */
SystemState assemble_state_from_edges(const SarModel& model, const Eigen::Vector2d& root_position,
                                      const Eigen::Vector2d& root_velocity, const PlanarMatrix& qe,
                                      const PlanarMatrix& qedot, double t = 0.0,
                                      double position_tol = kPositionTolerance,
                                      double velocity_tol = kVelocityTolerance);

/// KE = sum m_i |v_i|^2 / 2, PE = sum m_i g y_i.
Energy kinetic_and_potential_energy(const SarModel& model, const SystemState& state);

} // namespace sar
