#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sar/control.hpp"
#include "sar/dynamics.hpp"
#include "sar/model.hpp"

namespace sar {

struct SetpointSpec
{
  enum class Kind { None, Constant, Flapping };

  Kind kind = Kind::None;
  /// Kind::Constant: desired edge rows.
  PlanarMatrix rows;
  /// Kind::Flapping: theta(t) = amplitude cos(frequency t) + offset.
  double amplitude = 0.0;
  double frequency = 0.0;
  double offset = 0.0;
};

/// Initial configuration in edge terms: each rod is l_j * direction_j and turns at rate_j.
struct InitialCondition
{
  Eigen::Vector2d root_position = Eigen::Vector2d::Zero();
  Eigen::Vector2d root_velocity = Eigen::Vector2d::Zero();
  /// Unit direction of every edge, (n-1) x 2.
  PlanarMatrix edge_directions;
  /// Angular rate of every edge (rad/s); empty means all zero.
  Eigen::VectorXd edge_rates;
};

struct SimSettings
{
  double duration = 10.0;
  double dt = 1e-3;
  bool projection = false;
  int sample_every = 1;
};

struct Scenario
{
  std::string name;
  SarModel model;
  InitialCondition initial;
  /// false: no applied forces at all (F = 0).
  bool controlled = true;
  ControllerConfig controller;
  SetpointSpec setpoint;
  SimSettings sim;

  SystemState initial_state() const;
  std::optional<EdgeSetpoint> make_setpoint() const;
  ForceLaw force_law() const;
  IntegratorOptions integrator_options() const;
};

/// Two followers hanging off a leader; both rods start pointing down.
Scenario two_link_scenario();

/// Flapping five-rod tree tracking a time-varying setpoint with feedforward.
Scenario five_link_scenario();

/// Unforced two-mass rod spinning at `omega` about its centre of mass, which starts at the origin at rest.
Scenario dumbbell_scenario(double mass_a = 1.0, double mass_b = 2.0, double length = 0.5, double omega = 3.0);

/// Unforced three-mass chain 1 -> 2 -> 3 with tumbling initial rates.
Scenario chain_scenario();

std::vector<std::string> builtin_scenario_names();

/// Throws InvalidArgument listing the available names when `name` is unknown.
Scenario builtin_scenario(const std::string& name);

} // namespace sar
