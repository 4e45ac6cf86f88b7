#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "sar/control.hpp"
#include "sar/dynamics.hpp"
#include "sar/random.hpp"
#include "sar/scenarios.hpp"

using namespace sar;

TEST_CASE("lambda at rest without forces is zero")
{
  random::Rng rng(11);
  for (int k = 0; k < 20; ++k) {
    const SarModel m = random::random_model(rng, 2 + k % 7);
    SystemState s = random::random_state(rng, m);
    s.qdot.setZero();
    CHECK(solve_lambda(m, s, PlanarMatrix::Zero(m.node_count(), 2)).isZero());
  }
}

TEST_CASE("spinning dumbbell multiplier and tension")
{
  const double ma = 1.3, mb = 0.4, l = 0.7, w = 2.5;
  const Scenario db = dumbbell_scenario(ma, mb, l, w);
  const SystemState s = db.initial_state();
  const double mu = 1.0 / (1.0 / ma + 1.0 / mb);
  const Eigen::VectorXd lambda = solve_lambda(db.model, s, PlanarMatrix::Zero(2, 2));
  REQUIRE(lambda.size() == 1);
  CHECK(fixtures::rel(lambda(0), mu * w * w) <= 1e-12);

  const PlanarMatrix gamma = constraint_forces(db.model, s, lambda);
  CHECK(fixtures::rel(gamma.row(0).norm(), mu * w * w * l) <= 1e-12);
  CHECK((gamma.row(0) + gamma.row(1)).norm() < 1e-15);

  const PlanarMatrix acc = node_accelerations(db.model, s, PlanarMatrix::Zero(2, 2));
  const Eigen::RowVector2d com = (ma * s.q.row(0) + mb * s.q.row(1)) / (ma + mb);
  for (int i = 0; i < 2; ++i) {
    const Eigen::RowVector2d expected = -w * w * (s.q.row(i) - com) - Eigen::RowVector2d(0, kDefaultGravity);
    CHECK((acc.row(i) - expected).norm() < 1e-12);
  }
}

TEST_CASE("constraint forces")
{
  const double l = 0.5, c = 3.0;
  const SarModel m = fixtures::dumbbell_model(1, 2, l);
  const SystemState s = fixtures::hanging(l);
  CHECK(constraint_forces(m, s, Eigen::VectorXd::Zero(1)).isZero());
  const PlanarMatrix g = constraint_forces(m, s, Eigen::VectorXd::Constant(1, c));
  const Eigen::RowVector2d re(0, -l);
  CHECK(g.row(0).isApprox(-c * re));
  CHECK(g.row(1).isApprox(c * re));
}

TEST_CASE("Gamma as a sum of constraint gradients")
{
  random::Rng rng(5);
  for (int k = 0; k < 30; ++k) {
    const SarModel m = random::random_model(rng, 2 + k % 8);
    const SystemState s = random::random_state(rng, m);
    const Eigen::VectorXd lambda = Eigen::VectorXd::Random(m.edge_count());
    PlanarMatrix sum = PlanarMatrix::Zero(m.node_count(), 2);
    for (int j = 0; j < m.edge_count(); ++j)
      sum += lambda(j) * constraint_jacobian(m, s, j).transpose();
    const PlanarMatrix gamma = constraint_forces(m, s, lambda);
    CHECK((sum - gamma).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(gamma.colwise().sum().cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("accelerations at rest")
{
  const Scenario five = five_link_scenario();
  const SarModel& m = five.model;
  const SystemState s = five.initial_state();
  const PlanarMatrix zero = PlanarMatrix::Zero(6, 2);

  PlanarMatrix fall(6, 2);
  fall.col(0).setZero();
  fall.col(1).setConstant(-kDefaultGravity);
  CHECK((node_accelerations(m, s, zero) - fall).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(edge_accelerations(m, s, zero).cwiseAbs().maxCoeff() < 1e-14);

  const PlanarMatrix compensation = m.masses().asDiagonal() * m.gravity_matrix();
  CHECK(node_accelerations(m, s, compensation).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("node and edge accelerations agree on random states")
{
  random::Rng rng(3);
  for (int k = 0; k < 100; ++k) {
    const int n = 2 + k % 9;
    const SarModel m = random::random_model(rng, n);
    const SystemState s = random::random_state(rng, m);
    const PlanarMatrix f = random::random_forces(rng, n);
    const PlanarMatrix qdd = node_accelerations(m, s, f);
    const PlanarMatrix lhs = m.incidence_real().transpose() * qdd;
    CHECK((lhs - edge_accelerations(m, s, f)).cwiseAbs().maxCoeff() < 1e-10);

    const EdgeState e = edge_state(m, s);
    for (int j = 0; j < m.edge_count(); ++j)
      CHECK(std::abs(e.qe.row(j).dot(lhs.row(j)) + e.qedot.row(j).squaredNorm()) < 1e-8);

    const Eigen::VectorXd lambda = solve_lambda(m, s, f);
    const Eigen::MatrixXd j = multiplier_matrix(m, e.qe);
    const Eigen::VectorXd b = multiplier_rhs(m, e, f);
    CHECK((j * lambda - b).norm() <= 1e-10 * std::max(1.0, b.norm()));
  }
}

TEST_CASE("structured controller forces give Qeddot = -L_e Lambda Q_e + U")
{
  random::Rng rng(21);
  for (int k = 0; k < 30; ++k) {
    const int n = 2 + k % 9;
    const SarModel m = random::random_model(rng, n);
    const SystemState s = random::random_state(rng, m);
    const EdgeState e = edge_state(m, s);
    ControllerConfig cfg;
    cfg.leader.y = {0.5, 3.0, 0.1};
    const PlanarMatrix u = random::random_orthogonal_inputs(rng, e.qe);
    const PlanarMatrix f = assemble_forces_structured(m, cfg, u, e.qe, s.t);
    const Eigen::VectorXd lambda = solve_lambda(m, s, f);
    const PlanarMatrix expected = -m.edge_laplacian() * lambda.asDiagonal() * e.qe + u;
    CHECK((edge_accelerations(m, s, f) - expected).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("solve_lambda rejects states far from the manifold")
{
  const SarModel m = two_link_scenario().model;
  SystemState s{0.0, PlanarMatrix::Zero(3, 2), PlanarMatrix::Zero(3, 2)};
  CHECK_THROWS_AS(solve_lambda(m, s, PlanarMatrix::Zero(3, 2)), NotPositiveDefinite);
  CHECK_THROWS_AS(solve_lambda(m, s, PlanarMatrix::Zero(2, 2)), DimensionMismatch);
}

TEST_CASE("integrate: free fall")
{
  const SarModel one(Arborescence(1, {}), Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd());
  SystemState s{0.0, PlanarMatrix::Zero(1, 2), PlanarMatrix::Zero(1, 2)};
  s.q(0, 1) = 2.0;
  s.qdot(0, 0) = 0.5;
  const SimTrace tr = integrate(one, s, zero_force(), 1.0);
  REQUIRE(tr.samples.size() == 1001);
  const SystemState& end = tr.samples.back().state;
  CHECK(end.t == doctest::Approx(1.0));
  CHECK(std::abs(end.q(0, 1) - (2.0 - kDefaultGravity / 2)) <= 1e-12);
  CHECK(std::abs(end.q(0, 0) - 0.5) <= 1e-12);
}

TEST_CASE("integrate: sampling and errors")
{
  const Scenario db = dumbbell_scenario();
  const SystemState s = db.initial_state();
  IntegratorOptions opt;
  opt.sample_every = 7;
  const SimTrace tr = integrate(db.model, s, zero_force(), 0.1, opt);
  REQUIRE(tr.samples.size() == 16);
  CHECK(tr.samples[1].state.t == doctest::Approx(0.007));
  CHECK(tr.samples.back().state.t == doctest::Approx(0.1));
  CHECK(tr.samples.front().lambda.size() == 1);

  SystemState bad = s;
  bad.q(1, 0) += 0.1;
  CHECK_THROWS_AS(integrate(db.model, bad, zero_force(), 0.1), ConstraintViolation);

  const ForceLaw blowup = [](double t, const SystemState&) {
    PlanarMatrix f = PlanarMatrix::Zero(2, 2);
    if (t > 0.05)
      f(0, 0) = std::nan("");
    return f;
  };
  try {
    integrate(db.model, s, blowup, 0.1);
    FAIL("expected NonFiniteState");
  } catch (const NonFiniteState& e) {
    CHECK(e.time() == doctest::Approx(0.05).epsilon(0.05));
  }
}

TEST_CASE("integrate: free dumbbell keeps its rod length")
{
  const Scenario db = dumbbell_scenario();
  const SimTrace tr = integrate(db.model, db.initial_state(), zero_force(), 10.0);
  double drift = 0.0;
  for (const auto& smp : tr.samples)
    drift = std::max(drift, std::abs((smp.state.q.row(1) - smp.state.q.row(0)).norm() - 0.5));
  CHECK(drift <= 1e-6);
}

TEST_CASE("projection to the manifold")
{
  const Scenario five = five_link_scenario();
  SystemState s = five.initial_state();
  s.q.row(4) += Eigen::RowVector2d(1e-3, -2e-3);
  s.qdot.row(5) += Eigen::RowVector2d(0.2, 0.3);
  const SystemState p = project_to_manifold(five.model, s);
  CHECK(p.q.row(0) == s.q.row(0));
  for (int j = 0; j < 5; ++j) {
    CHECK(std::abs(holonomic_residual(five.model, p, j)) < 1e-15);
    CHECK(std::abs(velocity_residual(five.model, p, j)) < 1e-15);
  }
}
