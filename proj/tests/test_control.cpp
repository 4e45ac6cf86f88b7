#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "sar/control.hpp"
#include "sar/random.hpp"
#include "sar/scenarios.hpp"

using namespace sar;

TEST_CASE("projection matrices")
{
  const double l = 0.3;
  Eigen::Matrix2d p;
  p << 0, 0, 0, 1;
  CHECK(projection(Eigen::Vector2d(l, 0)).isApprox(p));
  p << 1, 0, 0, 0;
  CHECK(projection(Eigen::Vector2d(0, -l)).isApprox(p));
  p << 0.5, -0.5, -0.5, 0.5;
  CHECK(projection(l / std::sqrt(2.0) * Eigen::Vector2d(1, 1)).isApprox(p, 1e-15));
  CHECK_THROWS_AS(projection(Eigen::Vector2d::Zero()), InvalidArgument);
}

TEST_CASE("sinusoid and gain configuration")
{
  const Sinusoid s{2.0, std::numbers::pi, 0.5};
  CHECK(s(0.25) == doctest::Approx(2.0 * std::cos(std::numbers::pi * 0.25 + 0.5)));

  ControllerConfig c;
  c.kc_edges = {1.0, 2.0};
  CHECK(c.kc_for(1) == 2.0);
  CHECK(c.kv_for(1) == 10.0);
  CHECK_NOTHROW(c.validate(2));
  CHECK_THROWS_AS(c.validate(3), InvalidArgument);
  c.kv = 0.0;
  CHECK_THROWS_AS(c.validate(2), InvalidArgument);
}

TEST_CASE("edge control")
{
  const Scenario five = five_link_scenario();
  const EdgeSetpoint sp = *five.make_setpoint();
  const double t = 0.37;
  const SetpointSample d = sp(t);
  const EdgeState on_target{d.position, d.velocity};

  ControllerConfig cfg;
  for (int j = 0; j < 5; ++j)
    CHECK(edge_control(cfg, d, on_target, j).isZero());

  cfg.feedforward = true;
  for (int j = 0; j < 5; ++j) {
    const Eigen::Vector2d expected = projection(d.position.row(j).transpose()) * d.acceleration.row(j).transpose();
    CHECK(edge_control(cfg, sp, on_target, j, t).isApprox(expected));
  }

  random::Rng rng(2);
  const SystemState s = random::random_state(rng, five.model);
  const EdgeState e = edge_state(five.model, s);
  const PlanarMatrix u = edge_inputs(cfg, d, e);
  for (int j = 0; j < 5; ++j)
    CHECK(std::abs(u.row(j).dot(e.qe.row(j))) <= 1e-12);
  CHECK_THROWS_AS(edge_control(cfg, d, e, 5), InvalidArgument);
}

TEST_CASE("structured assembly")
{
  const Scenario two = two_link_scenario();
  const SarModel& m = two.model;
  const SetpointSample d = (*two.make_setpoint())(0.0);
  const double t = 0.8;
  const Eigen::Vector2d fl = two.controller.leader(t);
  CHECK(fl.isApprox(Eigen::Vector2d(0, 0.5 * std::cos(std::numbers::pi * t))));

  const PlanarMatrix f = assemble_forces_structured(m, two.controller, PlanarMatrix::Zero(2, 2), d.position, t);
  const Eigen::Vector2d g(0, kDefaultGravity);
  CHECK(f.row(0).transpose().isApprox(fl + m.masses()(0) * g));
  for (int i = 1; i < 3; ++i)
    CHECK(f.row(i).transpose().isApprox(m.masses()(i) * (fl / m.masses()(0) + g)));

  ControllerConfig quiet;
  const PlanarMatrix gc = assemble_forces_structured(m, quiet, PlanarMatrix::Zero(2, 2), d.position, t);
  CHECK(gc.isApprox(m.masses().asDiagonal() * m.gravity_matrix()));

  PlanarMatrix radial = d.position;
  CHECK_THROWS_AS(assemble_forces_structured(m, quiet, radial, d.position, t), OrthogonalityViolation);
}

TEST_CASE("recursive follower forces")
{
  const SarModel chain(Arborescence(3, {{0, 1}, {1, 2}}), Eigen::Vector3d(0.5, 0.3, 0.2), Eigen::Vector2d(1, 1));
  const Eigen::Vector2d fl(0.4, -1.1), ua(0.7, 0.2), ub(-0.3, 0.9);
  const FollowerForce f2 = follower_force_recursive(chain, 1, fl, ua);
  const FollowerForce f3 = follower_force_recursive(chain, 2, f2.bar_force, ub);
  CHECK(f3.bar_force.isApprox(0.2 * (fl / 0.5 + ua + ub)));
  CHECK(f3.force.isApprox(f3.bar_force + Eigen::Vector2d(0, 0.2 * kDefaultGravity)));

  const FollowerForce pass = follower_force_recursive(chain, 1, fl, Eigen::Vector2d::Zero());
  CHECK(pass.bar_force.isApprox(0.3 / 0.5 * fl));
  CHECK_THROWS_AS(follower_force_recursive(chain, 0, fl, ua), InvalidArgument);
}

TEST_CASE("recursive sweep matches structured assembly")
{
  const Scenario five = five_link_scenario();
  const SystemState s = five.initial_state();
  const EdgeState e = edge_state(five.model, s);
  random::Rng rng(13);
  const PlanarMatrix u5 = random::random_orthogonal_inputs(rng, e.qe);
  CHECK((assemble_forces_recursive(five.model, five.controller, u5, 0.3) -
         assemble_forces_structured(five.model, five.controller, u5, e.qe, 0.3))
          .cwiseAbs()
          .maxCoeff() <= 1e-12);

  for (int k = 0; k < 100; ++k) {
    const int n = std::uniform_int_distribution<int>(2, 10)(rng);
    const SarModel m = random::random_model(rng, n);
    const SystemState st = random::random_state(rng, m);
    const EdgeState es = edge_state(m, st);
    ControllerConfig cfg;
    cfg.leader.x = {1.0, 2.0, 0.3};
    const PlanarMatrix u = random::random_orthogonal_inputs(rng, es.qe);
    const PlanarMatrix fs = assemble_forces_structured(m, cfg, u, es.qe, st.t);
    const PlanarMatrix fr = assemble_forces_recursive(m, cfg, u, st.t);
    CHECK((fs - fr).cwiseAbs().maxCoeff() <= 1e-10);
    const PlanarMatrix back = m.incidence_real().transpose() * m.inverse_masses().asDiagonal() * fs;
    CHECK((back - u).cwiseAbs().maxCoeff() <= 1e-10);
    const PlanarMatrix prop = back * es.qe.transpose();
    CHECK(prop.diagonal().cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("closed-loop law at the setpoint is an equilibrium")
{
  Scenario two = two_link_scenario();
  two.controller.leader = {};
  const SetpointSample d = (*two.make_setpoint())(0.0);
  const SystemState s = assemble_state_from_edges(two.model, Eigen::Vector2d(0.2, 0.1), Eigen::Vector2d::Zero(),
                                                  d.position, d.velocity);
  const ForceLaw law = two.force_law();
  CHECK(law(0.0, s).isApprox(two.model.masses().asDiagonal() * two.model.gravity_matrix()));

  const SimTrace tr = integrate(two.model, s, law, 2.0);
  double worst = 0.0;
  for (const auto& smp : tr.samples)
    worst = std::max(worst, (smp.state.q - s.q).cwiseAbs().maxCoeff());
  CHECK(worst <= 1e-12);
}

TEST_CASE("flapping setpoint")
{
  const Eigen::VectorXd l = Eigen::VectorXd::Constant(5, 0.3);
  const double a = 3 * std::numbers::pi / 16, w = std::numbers::pi, c = std::numbers::pi / 16;
  const EdgeSetpoint sp = EdgeSetpoint::flapping(l, a, w, c);
  const SetpointSample d0 = sp(0.0);
  const double th = std::numbers::pi / 4;
  CHECK(d0.position.row(0).isApprox(Eigen::RowVector2d(-0.3 * std::cos(th), -0.3 * std::sin(th))));
  CHECK(d0.position.row(2) == Eigen::RowVector2d(0, 0.3));

  const double h = 1e-5;
  for (double t = 0.0; t <= 10.0; t += 0.173) {
    const SetpointSample d = sp(t);
    for (int j = 0; j < 5; ++j) {
      CHECK(std::abs(d.position.row(j).norm() - 0.3) <= 1e-15);
      CHECK(std::abs(d.position.row(j).dot(d.velocity.row(j))) <= 1e-12);
    }
    const PlanarMatrix dv = (sp(t + h).position - sp(t - h).position) / (2 * h);
    const PlanarMatrix da = (sp(t + h).velocity - sp(t - h).velocity) / (2 * h);
    CHECK((dv - d.velocity).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK((da - d.acceleration).cwiseAbs().maxCoeff() <= 1e-7);
  }
  CHECK_THROWS_AS(EdgeSetpoint::flapping(Eigen::VectorXd::Ones(4), a, w, c), DimensionMismatch);
}
