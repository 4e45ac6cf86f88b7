#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "sar/scenarios.hpp"

using namespace sar;

TEST_CASE("two-link scenario")
{
  const Scenario s = two_link_scenario();
  IntMatrix d(3, 2);
  d << -1, -1, 1, 0, 0, 1;
  CHECK(s.model.incidence() == d);
  CHECK(s.controller.kc == 10.0);
  CHECK(s.controller.kv == 10.0);
  CHECK_FALSE(s.controller.feedforward);
  const PlanarMatrix rows = (*s.make_setpoint())(3.0).position;
  CHECK(rows.row(0) == Eigen::RowVector2d(-0.1, 0));
  CHECK(rows.row(1) == Eigen::RowVector2d(0.1, 0));
  CHECK_NOTHROW(validate_state(s.model, s.initial_state()));
}

TEST_CASE("five-link scenario")
{
  const Scenario s = five_link_scenario();
  CHECK(s.model.incidence() == fixtures::five_link_d());
  CHECK(s.model.left_inverse() == fixtures::five_link_h());
  Eigen::VectorXd m(6);
  m << 0.7, 0.2, 0.2, 0.5, 0.1, 0.1;
  CHECK(s.model.masses() == m);
  CHECK(s.controller.feedforward);
  CHECK(s.setpoint.amplitude + s.setpoint.offset == doctest::Approx(std::numbers::pi / 4));
  for (double t : {0.0, 0.25, 1.1, 7.3})
    CHECK((s.controller.leader(t) - Eigen::Vector2d(0, std::sin(2 * std::numbers::pi * t))).cwiseAbs().maxCoeff() < 1e-12);

  const SystemState s0 = s.initial_state();
  const EdgeState e = edge_state(s.model, s0);
  CHECK(e.qe.col(0).isZero());
  const PlanarMatrix d0 = (*s.make_setpoint())(0.0).position;
  CHECK(e.qe.row(2) == d0.row(2));
  for (int j = 0; j < 5; ++j)
    CHECK(e.qe(j, 1) * d0(j, 1) > 0.0);
}

TEST_CASE("dumbbell scenario")
{
  const double ma = 1.0, mb = 2.0, l = 0.5, w = 3.0;
  const Scenario s = dumbbell_scenario(ma, mb, l, w);
  CHECK_FALSE(s.controlled);
  const SystemState s0 = s.initial_state();
  const Eigen::RowVector2d com = (ma * s0.q.row(0) + mb * s0.q.row(1)) / (ma + mb);
  const Eigen::RowVector2d vcom = (ma * s0.qdot.row(0) + mb * s0.qdot.row(1)) / (ma + mb);
  CHECK(com.norm() < 1e-15);
  CHECK(vcom.norm() < 1e-15);
  const Eigen::RowVector2d re = s0.q.row(1) - s0.q.row(0);
  const Eigen::RowVector2d rv = s0.qdot.row(1) - s0.qdot.row(0);
  CHECK(rv.norm() == doctest::Approx(w * l));
  CHECK(re.x() * rv.y() - re.y() * rv.x() == doctest::Approx(w * l * l));

  const SimTrace tr = integrate(s.model, s0, s.force_law(), 2.0);
  const double mu = ma * mb / (ma + mb);
  for (std::size_t i = 0; i < tr.samples.size(); i += 97) {
    const auto& smp = tr.samples[i];
    CHECK(fixtures::rel(smp.lambda(0), mu * w * w) < 1e-8);
    const Eigen::RowVector2d c = (ma * smp.state.q.row(0) + mb * smp.state.q.row(1)) / (ma + mb);
    const double t = smp.state.t;
    CHECK(std::abs(c.x()) < 1e-12);
    CHECK(std::abs(c.y() + 0.5 * kDefaultGravity * t * t) < 1e-10);
  }
}

TEST_CASE("chain scenario is a chain")
{
  const Scenario s = chain_scenario();
  CHECK(s.model.graph().is_chain());
  CHECK_FALSE(s.controlled);
  CHECK(s.sim.dt == 1e-4);
  CHECK(s.sim.duration == 2.0);
}

TEST_CASE("built-in lookup")
{
  for (const auto& name : builtin_scenario_names()) {
    const Scenario s = builtin_scenario(name);
    CHECK(s.name == name);
    CHECK_NOTHROW(validate_state(s.model, s.initial_state()));
  }
  try {
    builtin_scenario("three_link");
    FAIL("expected an error");
  } catch (const InvalidArgument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("two_link") != std::string::npos);
    CHECK(msg.find("five_link") != std::string::npos);
  }
}
