#include "sar/oracle.hpp"

#include <array>
#include <cmath>
#include <string>

namespace sar::oracle {

Eigen::VectorXd kkt_lambda(const SarModel& model, const SystemState& state, const PlanarMatrix& force)
{
  check_dimensions(model, state);
  const int n = model.node_count();
  const int m = model.edge_count();
  const int dim = 2 * n;

  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(dim + m, dim + m);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim + m);
  for (int i = 0; i < n; ++i) {
    const double mass = model.masses()[i];
    kkt(2 * i, 2 * i) = mass;
    kkt(2 * i + 1, 2 * i + 1) = mass;
    rhs[2 * i] = force(i, 0);
    rhs[2 * i + 1] = force(i, 1) - mass * model.gravity();
  }
  for (int j = 0; j < m; ++j) {
    const Edge& e = model.graph().edge(j);
    const Eigen::Vector2d r = (state.q.row(e.head) - state.q.row(e.tail)).transpose();
    const Eigen::Vector2d v = (state.qdot.row(e.head) - state.qdot.row(e.tail)).transpose();
    for (int k = 0; k < 2; ++k) {
      kkt(dim + j, 2 * e.head + k) = r[k];
      kkt(dim + j, 2 * e.tail + k) = -r[k];
      kkt(2 * e.head + k, dim + j) = r[k];
      kkt(2 * e.tail + k, dim + j) = -r[k];
    }
    rhs[dim + j] = -v.squaredNorm();
  }

  const Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
  if (!lu.isInvertible())
    throw NotPositiveDefinite("KKT system is singular");
  return lu.solve(rhs).tail(m);
}

namespace {

/// Forward-mode dual number a + b eps, eps^2 = 0. Nesting gives second derivatives.
template <class T>
struct Dual
{
  T re{};
  T eps{};
};

template <class T>
Dual<T> operator+(const Dual<T>& a, const Dual<T>& b)
{
  return {a.re + b.re, a.eps + b.eps};
}

template <class T>
Dual<T> operator*(double s, const Dual<T>& a)
{
  return {s * a.re, s * a.eps};
}

template <class T>
Dual<T> operator*(const Dual<T>& a, const Dual<T>& b)
{
  return {a.re * b.re, a.re * b.eps + a.eps * b.re};
}

template <class T>
Dual<T> operator-(const Dual<T>& a)
{
  return {-a.re, -a.eps};
}

using std::cos;
using std::sin;

template <class T>
Dual<T> cos(const Dual<T>& a)
{
  return {cos(a.re), -sin(a.re) * a.eps};
}

template <class T>
Dual<T> sin(const Dual<T>& a)
{
  return {sin(a.re), cos(a.re) * a.eps};
}

/// Generalized coordinates: (x_root, y_root, phi_1, ..., phi_m).
template <class T>
std::vector<std::array<T, 2>> node_positions(const SarModel& model, const std::vector<T>& q)
{
  const auto& g = model.graph();
  std::vector<std::array<T, 2>> p(static_cast<std::size_t>(g.node_count()));
  p[0] = {q[0], q[1]};
  for (int v : g.topological_order()) {
    const int j = g.incoming_edge(v);
    if (j < 0)
      continue;
    const double l = model.lengths()[j];
    const T& phi = q[static_cast<std::size_t>(2 + j)];
    const auto& base = p[static_cast<std::size_t>(g.parent(v))];
    p[static_cast<std::size_t>(v)] = {base[0] + l * cos(phi), base[1] + l * sin(phi)};
  }
  return p;
}

struct Kinematics
{
  /// Per node, 2 x dim Jacobian of its position.
  std::vector<Eigen::MatrixXd> jacobians;
  /// Per node, d/dt(J) qdot.
  std::vector<Eigen::Vector2d> velocity_products;
};

Kinematics kinematics(const SarModel& model, const Eigen::VectorXd& q, const Eigen::VectorXd& qdot)
{
  const auto n = static_cast<std::size_t>(model.node_count());
  const auto dim = static_cast<std::size_t>(q.size());
  Kinematics k;
  k.jacobians.assign(n, Eigen::MatrixXd::Zero(2, static_cast<Eigen::Index>(dim)));
  k.velocity_products.assign(n, Eigen::Vector2d::Zero());

  for (std::size_t c = 0; c < dim; ++c) {
    std::vector<Dual<double>> seeded(dim);
    for (std::size_t i = 0; i < dim; ++i)
      seeded[i] = {q[static_cast<Eigen::Index>(i)], i == c ? 1.0 : 0.0};
    const auto p = node_positions(model, seeded);
    for (std::size_t v = 0; v < n; ++v)
      for (int a = 0; a < 2; ++a)
        k.jacobians[v](a, static_cast<Eigen::Index>(c)) = p[v][static_cast<std::size_t>(a)].eps;
  }

  // q + (e1 + e2) qdot: the e1 e2 coefficient is the second directional derivative along qdot.
  std::vector<Dual<Dual<double>>> seeded(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const double qi = q[static_cast<Eigen::Index>(i)];
    const double vi = qdot[static_cast<Eigen::Index>(i)];
    seeded[i] = {{qi, vi}, {vi, 0.0}};
  }
  const auto p = node_positions(model, seeded);
  for (std::size_t v = 0; v < n; ++v)
    k.velocity_products[v] = {p[v][0].eps.eps, p[v][1].eps.eps};
  return k;
}

Eigen::VectorXd pack(const ChainCoordinates& c)
{
  Eigen::VectorXd q(2 + c.angles.size());
  q << c.root_position, c.angles;
  return q;
}

Eigen::VectorXd pack_rates(const ChainCoordinates& c)
{
  Eigen::VectorXd v(2 + c.rates.size());
  v << c.root_velocity, c.rates;
  return v;
}

ChainCoordinates unpack(const Eigen::VectorXd& q, const Eigen::VectorXd& qdot)
{
  const auto m = q.size() - 2;
  return {q.head<2>(), qdot.head<2>(), q.tail(m), qdot.tail(m)};
}

Eigen::VectorXd generalized_acceleration(const SarModel& model, const ForceLaw& law, double t, const Eigen::VectorXd& q,
                                         const Eigen::VectorXd& qdot)
{
  const Kinematics k = kinematics(model, q, qdot);
  const SystemState s = chain_state(model, unpack(q, qdot), t);
  const PlanarMatrix force = law(t, s);

  const auto dim = q.size();
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
  for (int i = 0; i < model.node_count(); ++i) {
    const auto& jac = k.jacobians[static_cast<std::size_t>(i)];
    const double mi = model.masses()[i];
    Eigen::Vector2d applied = force.row(i).transpose();
    applied.y() -= mi * model.gravity();
    mass += mi * jac.transpose() * jac;
    rhs += jac.transpose() * (applied - mi * k.velocity_products[static_cast<std::size_t>(i)]);
  }
  return mass.ldlt().solve(rhs);
}

} // namespace

ChainCoordinates chain_coordinates(const SarModel& model, const SystemState& state)
{
  const EdgeState edges = edge_state(model, state);
  const int m = model.edge_count();
  ChainCoordinates c;
  c.root_position = state.q.row(0).transpose();
  c.root_velocity = state.qdot.row(0).transpose();
  c.angles.resize(m);
  c.rates.resize(m);
  for (int j = 0; j < m; ++j) {
    const Eigen::Vector2d r = edges.qe.row(j).transpose();
    const Eigen::Vector2d v = edges.qedot.row(j).transpose();
    c.angles[j] = std::atan2(r.y(), r.x());
    c.rates[j] = (r.x() * v.y() - r.y() * v.x()) / r.squaredNorm();
  }
  return c;
}

SystemState chain_state(const SarModel& model, const ChainCoordinates& coords, double t)
{
  const auto& g = model.graph();
  SystemState s;
  s.t = t;
  s.q.resize(g.node_count(), 2);
  s.qdot.resize(g.node_count(), 2);
  s.q.row(0) = coords.root_position.transpose();
  s.qdot.row(0) = coords.root_velocity.transpose();
  for (int v : g.topological_order()) {
    const int j = g.incoming_edge(v);
    if (j < 0)
      continue;
    const double l = model.lengths()[j];
    const double phi = coords.angles[j];
    const double rate = coords.rates[j];
    s.q.row(v) = s.q.row(g.parent(v)) + Eigen::RowVector2d(l * std::cos(phi), l * std::sin(phi));
    s.qdot.row(v) = s.qdot.row(g.parent(v)) + Eigen::RowVector2d(-l * std::sin(phi) * rate, l * std::cos(phi) * rate);
  }
  return s;
}

ChainTrace minimal_coordinate_chain(const SarModel& model, const ChainCoordinates& initial, const ForceLaw& force_law,
                                    double t_end, double dt)
{
  if (!model.graph().is_chain())
    throw InvalidArgument("minimal-coordinate oracle only handles chains");
  if (!(dt > 0.0))
    throw InvalidArgument("time step must be positive");
  if (initial.angles.size() != model.edge_count() || initial.rates.size() != model.edge_count())
    throw DimensionMismatch("need one angle and one rate per rod");

  Eigen::VectorXd q = pack(initial);
  Eigen::VectorXd v = pack_rates(initial);
  const long steps = std::lround(t_end / dt);

  ChainTrace trace;
  trace.times.reserve(static_cast<std::size_t>(steps + 1));
  trace.positions.reserve(static_cast<std::size_t>(steps + 1));
  auto record = [&](double t) {
    trace.times.push_back(t);
    trace.positions.push_back(chain_state(model, unpack(q, v), t).q);
  };
  record(0.0);
  for (long k = 1; k <= steps; ++k) {
    const double t = static_cast<double>(k - 1) * dt;
    const Eigen::VectorXd a1 = generalized_acceleration(model, force_law, t, q, v);
    const Eigen::VectorXd q2 = q + 0.5 * dt * v, v2 = v + 0.5 * dt * a1;
    const Eigen::VectorXd a2 = generalized_acceleration(model, force_law, t + 0.5 * dt, q2, v2);
    const Eigen::VectorXd q3 = q + 0.5 * dt * v2, v3 = v + 0.5 * dt * a2;
    const Eigen::VectorXd a3 = generalized_acceleration(model, force_law, t + 0.5 * dt, q3, v3);
    const Eigen::VectorXd q4 = q + dt * v3, v4 = v + dt * a3;
    const Eigen::VectorXd a4 = generalized_acceleration(model, force_law, t + dt, q4, v4);
    q += (dt / 6.0) * (v + 2.0 * v2 + 2.0 * v3 + v4);
    v += (dt / 6.0) * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
    record(static_cast<double>(k) * dt);
  }
  return trace;
}

} // namespace sar::oracle
