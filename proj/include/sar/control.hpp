#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "sar/dynamics.hpp"
#include "sar/model.hpp"

namespace sar {

/// a cos(w t + phi).
struct Sinusoid
{
  double amplitude = 0.0;
  double angular_frequency = 0.0;
  double phase = 0.0;

  double operator()(double t) const;
};

/// Open-loop leader force f_l(t), one sinusoid per axis.
struct LeaderForce
{
  Sinusoid x;
  Sinusoid y;

  Eigen::Vector2d operator()(double t) const { return {x(t), y(t)}; }
};

struct ControllerConfig
{
  double kc = 10.0;
  double kv = 10.0;
  /// Optional per-edge overrides; empty means every edge uses kc / kv.
  std::vector<double> kc_edges;
  std::vector<double> kv_edges;
  LeaderForce leader;
  /// Adds the desired edge acceleration inside the projection.
  bool feedforward = false;

  double kc_for(int j) const;
  double kv_for(int j) const;
  /// Throws InvalidArgument for non-positive gains or override vectors of the wrong length.
  void validate(int edge_count) const;
};

/// Desired edge coordinates and their first two time derivatives at one instant.
struct SetpointSample
{
  PlanarMatrix position;
  PlanarMatrix velocity;
  PlanarMatrix acceleration;
};

/// Time-parameterized desired edge coordinates with analytic derivatives.
class EdgeSetpoint
{
public:
  using Sampler = std::function<SetpointSample(double)>;

  explicit EdgeSetpoint(Sampler sampler) : sampler_(std::move(sampler)) {}

  SetpointSample operator()(double t) const { return sampler_(t); }

  static EdgeSetpoint constant(PlanarMatrix rows);

  /**
   * Five-edge flapping pattern with theta(t) = amplitude cos(frequency t) + offset:
   * rows (-l cos, -l sin), (l cos, -l sin), (0, l), (-l cos, l sin), (l cos, l sin).
   */
  static EdgeSetpoint flapping(const Eigen::VectorXd& lengths, double amplitude, double frequency, double offset);

private:
  Sampler sampler_;
};

/**
 * Orthogonal projector onto the complement of span{r}: P = I - r r^T / |r|^2.
 * On the constraint manifold |r| = l_j; normalizing by the actual length keeps
 * P r = 0 exact under integration drift.
 */
Eigen::Matrix2d projection(const Eigen::Vector2d& r);

/// u_j = P_j(-kc e_c - kv e_v [+ desired acceleration]).
Eigen::Vector2d edge_control(const ControllerConfig& config, const SetpointSample& desired, const EdgeState& edges,
                             int j);

Eigen::Vector2d edge_control(const ControllerConfig& config, const EdgeSetpoint& setpoint, const EdgeState& edges,
                             int j, double t);

/// All rows u_j stacked into U ((n-1) x 2).
PlanarMatrix edge_inputs(const ControllerConfig& config, const SetpointSample& desired, const EdgeState& edges);

/// Tolerance on |u_j . r_ej| accepted by assemble_forces_structured.
inline constexpr double kOrthogonalityTolerance = 1e-9;

/**
 * F = M(1 f_l^T / m_1 + G + H^T U). Rows of U must be orthogonal to the matching
 * rows of `qe`; throws OrthogonalityViolation otherwise.
 */
PlanarMatrix assemble_forces_structured(const SarModel& model, const ControllerConfig& config, const PlanarMatrix& u,
                                        const PlanarMatrix& qe, double t);

struct FollowerForce
{
  Eigen::Vector2d force;
  /// Gravity-free part, handed down to the node's children.
  Eigen::Vector2d bar_force;
};

/**
 * Force on follower `node` from its parent's gravity-free force and the input of
 * its incoming edge: fbar_i = m_i (fbar_k / m_k + u_j), f_i = fbar_i + m_i g e_2.
 */
FollowerForce follower_force_recursive(const SarModel& model, int node, const Eigen::Vector2d& parent_bar_force,
                                       const Eigen::Vector2d& u);

/// Root-to-leaves sweep of follower_force_recursive starting from fbar_1 = f_l(t).
PlanarMatrix assemble_forces_recursive(const SarModel& model, const ControllerConfig& config, const PlanarMatrix& u,
                                       double t);

/// Leader-follower feedback law for the integrator.
ForceLaw closed_loop_force_law(const SarModel& model, const ControllerConfig& config, const EdgeSetpoint& setpoint);

} // namespace sar
