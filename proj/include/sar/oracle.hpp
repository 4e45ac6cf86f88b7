#pragma once

#include <vector>

#include <Eigen/Dense>

#include "sar/dynamics.hpp"
#include "sar/model.hpp"

namespace sar::oracle {

/**
 * Multipliers from the saddle-point system on the stacked coordinate vector
 * q = (x_1, y_1, ..., x_n, y_n):
 *
 *   [ M  A^T ] [ qddot  ]   [ F - M g ]
 *   [ A   0  ] [ lambda ] = [    c    ],   c_j = -|rdot_ej|^2
 *
 * with A_j the gradient of |r_head - r_tail|^2 / 2. Built from the edge list
 * alone. Throws NotPositiveDefinite if the system is singular.
 */
Eigen::VectorXd kkt_lambda(const SarModel& model, const SystemState& state, const PlanarMatrix& force);

/// Root position/velocity plus one absolute angle (and rate) per rod.
struct ChainCoordinates
{
  Eigen::Vector2d root_position = Eigen::Vector2d::Zero();
  Eigen::Vector2d root_velocity = Eigen::Vector2d::Zero();
  Eigen::VectorXd angles;
  Eigen::VectorXd rates;
};

/// Reads angles and rates off a node-coordinate state (exact inverse of chain_state on the manifold).
ChainCoordinates chain_coordinates(const SarModel& model, const SystemState& state);

/// Node positions and velocities for the given minimal coordinates.
SystemState chain_state(const SarModel& model, const ChainCoordinates& coords, double t = 0.0);

struct ChainTrace
{
  std::vector<double> times;
  std::vector<PlanarMatrix> positions;
};

/**
 * Integrates a chain (every node has at most one child) in minimal coordinates
 * with RK4. The mass matrix and velocity-product terms come from forward-mode
 * dual-number derivatives of the node position map. Forces are applied per
 * node through `force_law`, evaluated at each sub-stage.
 */
ChainTrace minimal_coordinate_chain(const SarModel& model, const ChainCoordinates& initial,
                                    const ForceLaw& force_law, double t_end, double dt);

} // namespace sar::oracle
