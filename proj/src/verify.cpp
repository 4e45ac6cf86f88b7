#include "sar/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "sar/control.hpp"
#include "sar/dynamics.hpp"
#include "sar/oracle.hpp"
#include "sar/scenarios.hpp"

namespace sar::verify {

namespace {

constexpr int kCampaignSize = 100;

Check make(const std::string& suite, std::string name, double measured, double tol)
{
  return {suite, std::move(name), measured, tol, measured <= tol};
}

Arborescence five_link_graph()
{
  return Arborescence(6, {{0, 1}, {0, 2}, {0, 3}, {3, 4}, {3, 5}});
}

std::vector<Check> graph_suite(random::Rng& rng)
{
  std::vector<Check> out;
  const Arborescence g = five_link_graph();
  IntMatrix d_ref(6, 5), h_ref(5, 6);
  d_ref << -1, -1, -1, 0, 0,
            1, 0, 0, 0, 0,
            0, 1, 0, 0, 0,
            0, 0, 1, -1, -1,
            0, 0, 0, 1, 0,
            0, 0, 0, 0, 1;
  h_ref << 0, 1, 0, 0, 0, 0,
           0, 0, 1, 0, 0, 0,
           0, 0, 0, 1, 1, 1,
           0, 0, 0, 0, 1, 0,
           0, 0, 0, 0, 0, 1;
  const IntMatrix d = incidence_matrix(g);
  const IntMatrix h = left_inverse(g);
  out.push_back(make("graph", "five-link D matches reference", (d - d_ref).cwiseAbs().maxCoeff(), 0));
  out.push_back(make("graph", "five-link H matches reference", (h - h_ref).cwiseAbs().maxCoeff(), 0));
  out.push_back(make("graph", "five-link H*D = I",
                     (h * d - IntMatrix::Identity(5, 5)).cwiseAbs().maxCoeff(), 0));

  int hd_bad = 0, rank_bad = 0, sum_bad = 0;
  double lw_sum = 0.0;
  for (int k = 0; k < kCampaignSize; ++k) {
    const int n = std::uniform_int_distribution<int>(2, 50)(rng);
    const Arborescence t = random::random_tree(rng, n);
    const IntMatrix dt = incidence_matrix(t);
    const IntMatrix ht = left_inverse(t);
    if (ht * dt != IntMatrix::Identity(n - 1, n - 1))
      ++hd_bad;
    if (Eigen::FullPivLU<Eigen::MatrixXd>(dt.cast<double>()).rank() != n - 1)
      ++rank_bad;
    if (dt.colwise().sum().cwiseAbs().maxCoeff() != 0)
      ++sum_bad;
    Eigen::VectorXd w = Eigen::VectorXd::Random(n - 1);
    lw_sum = std::max(lw_sum, weighted_graph_laplacian(dt, w).rowwise().sum().cwiseAbs().maxCoeff());
  }
  out.push_back(make("graph", "random trees: H*D = I (count of failures)", hd_bad, 0));
  out.push_back(make("graph", "random trees: rank D = n-1 (count of failures)", rank_bad, 0));
  out.push_back(make("graph", "random trees: 1^T D = 0 (count of failures)", sum_bad, 0));
  out.push_back(make("graph", "random trees: L_w 1 = 0", lw_sum, 1e-12));

  auto rejects = [](std::function<void()> f, GraphError::Kind kind) {
    try {
      f();
    } catch (const GraphError& e) {
      return e.kind() == kind;
    }
    return false;
  };
  const bool cycle = rejects([] { Arborescence(3, {{0, 1}, {1, 2}, {2, 0}}); }, GraphError::Kind::CycleDetected);
  const bool parents =
    rejects([] { Arborescence(3, {{0, 2}, {1, 2}}); }, GraphError::Kind::MultipleParents);
  out.push_back(make("graph", "cycle rejected", cycle ? 0 : 1, 0));
  out.push_back(make("graph", "node with two parents rejected", parents ? 0 : 1, 0));
  return out;
}

std::vector<Check> dynamics_suite(random::Rng& rng)
{
  std::vector<Check> out;
  double edge_acc = 0.0, second = 0.0, gamma_sum = 0.0;
  for (int k = 0; k < kCampaignSize; ++k) {
    const int n = std::uniform_int_distribution<int>(2, 8)(rng);
    const SarModel model = random::random_model(rng, n);
    const SystemState s = random::random_state(rng, model);
    const PlanarMatrix f = random::random_forces(rng, n);
    Eigen::VectorXd lambda;
    const PlanarMatrix qdd = node_accelerations(model, s, f, lambda);
    const PlanarMatrix qedd = edge_accelerations(model, s, f);
    const PlanarMatrix lhs = model.incidence_real().transpose() * qdd;
    edge_acc = std::max(edge_acc, (lhs - qedd).cwiseAbs().maxCoeff() / std::max(1.0, qedd.cwiseAbs().maxCoeff()));
    const EdgeState e = edge_state(model, s);
    for (int j = 0; j < model.edge_count(); ++j) {
      const double r = e.qe.row(j).dot(lhs.row(j)) + e.qedot.row(j).squaredNorm();
      second = std::max(second, std::abs(r) / std::max(1.0, e.qedot.row(j).squaredNorm()));
    }
    const PlanarMatrix gamma = constraint_forces(model, s, lambda);
    gamma_sum = std::max(gamma_sum,
                         gamma.colwise().sum().cwiseAbs().maxCoeff() / std::max(1.0, gamma.cwiseAbs().maxCoeff()));
  }
  out.push_back(make("dynamics", "D^T Qddot = Qeddot on random states", edge_acc, 1e-10));
  out.push_back(make("dynamics", "r_e . rddot_e + |rdot_e|^2 = 0 on random states", second, 1e-8));
  out.push_back(make("dynamics", "1^T Gamma = 0 on random states", gamma_sum, 1e-12));

  {
    const Scenario db = dumbbell_scenario();
    const double ma = db.model.masses()(0), mb = db.model.masses()(1);
    const double w = 3.0, mu = ma * mb / (ma + mb);
    const Eigen::VectorXd lambda =
      solve_lambda(db.model, db.initial_state(), PlanarMatrix::Zero(2, 2));
    out.push_back(make("dynamics", "dumbbell lambda = mu omega^2 (relative)",
                       std::abs(lambda(0) - mu * w * w) / (mu * w * w), 1e-10));
  }
  {
    const SarModel single(Arborescence(1, {}), Eigen::VectorXd::Constant(1, 2.0), Eigen::VectorXd());
    SystemState s{0.0, PlanarMatrix::Zero(1, 2), PlanarMatrix::Zero(1, 2)};
    s.q(0, 1) = 3.0;
    const SimTrace tr = integrate(single, s, zero_force(), 1.0, {});
    const double y = tr.samples.back().state.q(0, 1);
    out.push_back(make("dynamics", "free fall y(1) = y0 - g/2", std::abs(y - (3.0 - kDefaultGravity / 2)), 1e-9));
  }
  {
    random::Rng local(rng());
    const SarModel model = random::random_model(local, 6);
    const SystemState s = random::random_state(local, model);
    const SimTrace tr = integrate(model, s, zero_force(), s.t + 1.0, {});
    double drift = 0.0;
    for (const auto& sample : tr.samples) {
      const EdgeState e = edge_state(model, sample.state);
      for (int j = 0; j < model.edge_count(); ++j)
        drift = std::max(drift, std::abs(e.qe.row(j).norm() - model.lengths()(j)));
    }
    out.push_back(make("dynamics", "random 6-node tree, 1 s unforced: constraint drift", drift, 1e-6));
  }
  return out;
}

std::vector<Check> control_suite(random::Rng& rng)
{
  std::vector<Check> out;
  double assembly = 0.0, leader = 0.0, independence = 0.0, orth = 0.0, proj = 0.0;
  for (int k = 0; k < kCampaignSize; ++k) {
    const int n = std::uniform_int_distribution<int>(2, 10)(rng);
    const SarModel model = random::random_model(rng, n);
    const SystemState s = random::random_state(rng, model);
    const EdgeState e = edge_state(model, s);
    ControllerConfig cfg;
    cfg.kc = random::uniform(rng, 0.5, 20.0);
    cfg.kv = random::uniform(rng, 0.5, 20.0);
    cfg.leader.x = {random::uniform(rng, -2, 2), random::uniform(rng, 0, 7), random::uniform(rng, -3, 3)};
    cfg.leader.y = {random::uniform(rng, -2, 2), random::uniform(rng, 0, 7), random::uniform(rng, -3, 3)};

    const PlanarMatrix u = random::random_orthogonal_inputs(rng, e.qe);
    const PlanarMatrix fs = assemble_forces_structured(model, cfg, u, e.qe, s.t);
    const PlanarMatrix fr = assemble_forces_recursive(model, cfg, u, s.t);
    assembly = std::max(assembly, (fs - fr).cwiseAbs().maxCoeff());
    Eigen::Vector2d expected = cfg.leader(s.t);
    expected.y() += model.masses()(0) * model.gravity();
    leader = std::max(leader, (fr.row(0).transpose() - expected).cwiseAbs().maxCoeff());

    const Eigen::VectorXd l_f = solve_lambda(model, s, fr);
    const Eigen::VectorXd l_0 = solve_lambda(model, s, PlanarMatrix::Zero(n, 2));
    independence = std::max(independence, (l_f - l_0).cwiseAbs().maxCoeff() / std::max(1.0, l_0.cwiseAbs().maxCoeff()));

    SetpointSample desired{random::random_forces(rng, n - 1, 1.0), random::random_forces(rng, n - 1, 1.0),
                           random::random_forces(rng, n - 1, 1.0)};
    cfg.feedforward = k % 2 == 0;
    const PlanarMatrix uc = edge_inputs(cfg, desired, e);
    for (int j = 0; j < n - 1; ++j) {
      orth = std::max(orth, std::abs(uc.row(j).dot(e.qe.row(j))) / std::max(1.0, uc.row(j).norm()));
      const Eigen::Matrix2d p = projection(e.qe.row(j).transpose());
      proj = std::max({proj, (p * p - p).cwiseAbs().maxCoeff(), (p * e.qe.row(j).transpose()).cwiseAbs().maxCoeff()});
    }
  }
  out.push_back(make("control", "recursive sweep = structured assembly", assembly, 1e-10));
  out.push_back(make("control", "leader row = f_l + m_1 g e_2", leader, 0));
  out.push_back(make("control", "lambda independent of controller forces", independence, 1e-10));
  out.push_back(make("control", "u_j . r_ej = 0", orth, 1e-10));
  out.push_back(make("control", "P^2 = P and P r = 0", proj, 1e-14));
  return out;
}

std::vector<Check> oracle_suite(random::Rng& rng)
{
  std::vector<Check> out;
  double rel = 0.0;
  for (int k = 0; k < kCampaignSize; ++k) {
    const int n = std::uniform_int_distribution<int>(2, 8)(rng);
    const SarModel model = random::random_model(rng, n);
    const SystemState s = random::random_state(rng, model);
    const PlanarMatrix f = random::random_forces(rng, n);
    const Eigen::VectorXd a = solve_lambda(model, s, f);
    const Eigen::VectorXd b = oracle::kkt_lambda(model, s, f);
    rel = std::max(rel, (a - b).cwiseAbs().maxCoeff() / std::max(b.cwiseAbs().maxCoeff(), 1e-300));
  }
  out.push_back(make("oracle", "closed-form lambda vs KKT (relative, 100 random states)", rel, 1e-8));

  const Scenario chain = chain_scenario();
  const SystemState s0 = chain.initial_state();
  const SimTrace tr = integrate(chain.model, s0, zero_force(), chain.sim.duration, chain.integrator_options());
  const oracle::ChainTrace ref = oracle::minimal_coordinate_chain(
    chain.model, oracle::chain_coordinates(chain.model, s0), zero_force(), chain.sim.duration, chain.sim.dt);
  double dev = 0.0;
  if (ref.positions.size() != tr.samples.size()) {
    dev = INFINITY;
  } else {
    for (std::size_t i = 0; i < ref.positions.size(); ++i)
      dev = std::max(dev, (ref.positions[i] - tr.samples[i].state.q).cwiseAbs().maxCoeff());
  }
  out.push_back(make("oracle", "3-mass chain vs minimal coordinates, 2 s", dev, 1e-5));
  return out;
}

} // namespace

std::vector<std::string> suite_names()
{
  return {"graph", "dynamics", "control", "oracle", "all"};
}

std::vector<Check> run_suite(const std::string& suite, std::uint64_t seed)
{
  random::Rng rng(seed);
  std::vector<Check> out;
  auto append = [&](std::vector<Check> c) { out.insert(out.end(), c.begin(), c.end()); };
  if (suite == "graph" || suite == "all")
    append(graph_suite(rng));
  if (suite == "dynamics" || suite == "all")
    append(dynamics_suite(rng));
  if (suite == "control" || suite == "all")
    append(control_suite(rng));
  if (suite == "oracle" || suite == "all")
    append(oracle_suite(rng));
  if (out.empty())
    throw InvalidArgument("unknown suite '" + suite + "' (available: graph, dynamics, control, oracle, all)");
  return out;
}

} // namespace sar::verify
