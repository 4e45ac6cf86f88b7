#include "sar/scenarios.hpp"

#include <numbers>

namespace sar {

namespace {

Eigen::VectorXd vec(std::initializer_list<double> values)
{
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values)
    v[i++] = x;
  return v;
}

PlanarMatrix rows(std::initializer_list<std::pair<double, double>> values)
{
  PlanarMatrix m(static_cast<Eigen::Index>(values.size()), 2);
  Eigen::Index i = 0;
  for (const auto& [x, y] : values)
    m.row(i++) << x, y;
  return m;
}

} // namespace

SystemState Scenario::initial_state() const
{
  const int m = model.edge_count();
  if (initial.edge_directions.rows() != m)
    throw DimensionMismatch("initial condition needs " + std::to_string(m) + " edge directions");
  if (initial.edge_rates.size() != 0 && initial.edge_rates.size() != m)
    throw DimensionMismatch("initial condition needs " + std::to_string(m) + " edge rates");
  PlanarMatrix qe(m, 2);
  PlanarMatrix qedot(m, 2);
  for (int j = 0; j < m; ++j) {
    const Eigen::Vector2d dir = initial.edge_directions.row(j).transpose();
    const double norm = dir.norm();
    if (!(norm > 0.0))
      throw InvalidArgument("edge " + std::to_string(j + 1) + " has a zero initial direction");
    const Eigen::Vector2d r = model.lengths()[j] * (dir / norm);
    const double rate = initial.edge_rates.size() == 0 ? 0.0 : initial.edge_rates[j];
    qe.row(j) = r.transpose();
    qedot.row(j) << -rate * r.y(), rate * r.x();
  }
  return assemble_state_from_edges(model, initial.root_position, initial.root_velocity, qe, qedot);
}

std::optional<EdgeSetpoint> Scenario::make_setpoint() const
{
  switch (setpoint.kind) {
  case SetpointSpec::Kind::None:
    return std::nullopt;
  case SetpointSpec::Kind::Constant:
    if (setpoint.rows.rows() != model.edge_count())
      throw DimensionMismatch("constant setpoint needs " + std::to_string(model.edge_count()) + " rows");
    return EdgeSetpoint::constant(setpoint.rows);
  case SetpointSpec::Kind::Flapping:
    return EdgeSetpoint::flapping(model.lengths(), setpoint.amplitude, setpoint.frequency, setpoint.offset);
  }
  return std::nullopt;
}

ForceLaw Scenario::force_law() const
{
  if (!controlled)
    return zero_force();
  auto target = make_setpoint();
  if (!target)
    throw InvalidArgument("a controlled scenario needs a setpoint");
  return closed_loop_force_law(model, controller, *target);
}

IntegratorOptions Scenario::integrator_options() const
{
  IntegratorOptions o;
  o.dt = sim.dt;
  o.project = sim.projection;
  o.sample_every = sim.sample_every;
  return o;
}

Scenario two_link_scenario()
{
  const double l = 0.1;
  Scenario s{"two_link",
             SarModel(Arborescence(3, {{0, 1}, {0, 2}}), vec({0.7, 0.2, 0.2}), vec({l, l})),
             {},
             true,
             {},
             {},
             {}};
  s.initial.edge_directions = rows({{0.0, -1.0}, {0.0, -1.0}});
  s.controller.kc = 10.0;
  s.controller.kv = 10.0;
  s.controller.leader.y = {0.5, std::numbers::pi, 0.0};
  s.setpoint.kind = SetpointSpec::Kind::Constant;
  s.setpoint.rows = rows({{-l, 0.0}, {l, 0.0}});
  return s;
}

Scenario five_link_scenario()
{
  const double l = 0.3;
  Scenario s{"five_link",
             SarModel(Arborescence(6, {{0, 1}, {0, 2}, {0, 3}, {3, 4}, {3, 5}}), vec({0.7, 0.2, 0.2, 0.5, 0.1, 0.1}),
                      vec({l, l, l, l, l})),
             {},
             true,
             {},
             {},
             {}};
  // Vertical, on the side of each rod's desired y-component at t = 0.
  s.initial.edge_directions = rows({{0.0, -1.0}, {0.0, -1.0}, {0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}});
  s.controller.kc = 10.0;
  s.controller.kv = 10.0;
  s.controller.feedforward = true;
  // sin(2 pi t)
  s.controller.leader.y = {1.0, 2.0 * std::numbers::pi, -0.5 * std::numbers::pi};
  s.setpoint.kind = SetpointSpec::Kind::Flapping;
  s.setpoint.amplitude = 3.0 * std::numbers::pi / 16.0;
  s.setpoint.frequency = std::numbers::pi;
  s.setpoint.offset = std::numbers::pi / 16.0;
  return s;
}

Scenario dumbbell_scenario(double mass_a, double mass_b, double length, double omega)
{
  Scenario s{"dumbbell", SarModel(Arborescence(2, {{0, 1}}), vec({mass_a, mass_b}), vec({length})), {}, false, {}, {},
             {}};
  const double share = mass_b / (mass_a + mass_b);
  s.initial.edge_directions = rows({{1.0, 0.0}});
  s.initial.edge_rates = vec({omega});
  // Centre of mass at the origin and at rest.
  s.initial.root_position = {-share * length, 0.0};
  s.initial.root_velocity = {0.0, -share * omega * length};
  return s;
}

Scenario chain_scenario()
{
  Scenario s{"chain", SarModel(Arborescence(3, {{0, 1}, {1, 2}}), vec({0.5, 0.3, 0.2}), vec({0.4, 0.3})), {}, false,
             {}, {}, {}};
  s.initial.edge_directions = rows({{1.0, 0.0}, {0.5, 0.75}});
  s.initial.edge_rates = vec({2.0, -3.0});
  s.sim.duration = 2.0;
  s.sim.dt = 1e-4;
  return s;
}

std::vector<std::string> builtin_scenario_names()
{
  return {"two_link", "five_link", "dumbbell", "chain"};
}

Scenario builtin_scenario(const std::string& name)
{
  if (name == "two_link")
    return two_link_scenario();
  if (name == "five_link")
    return five_link_scenario();
  if (name == "dumbbell")
    return dumbbell_scenario();
  if (name == "chain")
    return chain_scenario();
  std::string known;
  for (const auto& n : builtin_scenario_names())
    known += (known.empty() ? "" : ", ") + n;
  throw InvalidArgument("unknown scenario '" + name + "'; available: " + known);
}

} // namespace sar
