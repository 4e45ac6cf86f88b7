#include "sar/trace_io.hpp"

#include <cstdio>
#include <ostream>

namespace sar::io {

namespace {

void put(std::ostream& out, double x)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out << ',' << buf;
}

std::string num(int i)
{
  return std::to_string(i + 1);
}

} // namespace

std::vector<std::string> trace_columns(const SarModel& model, bool with_tracking)
{
  const int n = model.node_count();
  const int m = model.edge_count();
  std::vector<std::string> cols{"t"};
  for (int i = 0; i < n; ++i) {
    cols.push_back("x" + num(i));
    cols.push_back("y" + num(i));
  }
  for (int i = 0; i < n; ++i) {
    cols.push_back("vx" + num(i));
    cols.push_back("vy" + num(i));
  }
  for (int j = 0; j < m; ++j) {
    cols.push_back("qe" + num(j) + "_x");
    cols.push_back("qe" + num(j) + "_y");
  }
  for (int j = 0; j < m; ++j)
    cols.push_back("lambda" + num(j));
  if (with_tracking)
    for (int j = 0; j < m; ++j)
      cols.push_back("ec" + num(j));
  cols.push_back("constraint_drift");
  cols.push_back("velocity_residual_max");
  if (with_tracking)
    for (int j = 0; j < m; ++j)
      cols.push_back("ev" + num(j));
  cols.push_back("kinetic_energy");
  cols.push_back("potential_energy");
  cols.push_back("sigma_min_j");
  for (int j = 0; j < m; ++j)
    cols.push_back("x_norm" + num(j));
  return cols;
}

void write_trace_csv(std::ostream& out, const SarModel& model, const SimTrace& trace,
                     const std::vector<DiagnosticsRow>& diagnostics)
{
  if (diagnostics.size() != trace.samples.size())
    throw DimensionMismatch("diagnostics do not match the trace");
  const bool tracking = !diagnostics.empty() && !diagnostics.front().position_error.empty();
  const auto cols = trace_columns(model, tracking);
  for (std::size_t c = 0; c < cols.size(); ++c)
    out << (c ? "," : "") << cols[c];
  out << '\n';

  for (std::size_t k = 0; k < trace.samples.size(); ++k) {
    const TraceSample& s = trace.samples[k];
    const DiagnosticsRow& d = diagnostics[k];
    const EdgeState edges = edge_state(model, s.state);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", s.state.t);
    out << buf;
    for (Eigen::Index i = 0; i < s.state.q.rows(); ++i)
      for (int a = 0; a < 2; ++a)
        put(out, s.state.q(i, a));
    for (Eigen::Index i = 0; i < s.state.qdot.rows(); ++i)
      for (int a = 0; a < 2; ++a)
        put(out, s.state.qdot(i, a));
    for (Eigen::Index j = 0; j < edges.qe.rows(); ++j)
      for (int a = 0; a < 2; ++a)
        put(out, edges.qe(j, a));
    for (Eigen::Index j = 0; j < s.lambda.size(); ++j)
      put(out, s.lambda[j]);
    for (double e : d.position_error)
      put(out, e);
    put(out, d.constraint_drift);
    put(out, d.velocity_residual_max);
    for (double e : d.velocity_error)
      put(out, e);
    put(out, d.energy.kinetic);
    put(out, d.energy.potential);
    put(out, d.sigma_min_j);
    for (double x : d.residual_x)
      put(out, x);
    out << '\n';
  }
}

void write_summary_text(std::ostream& out, const std::string& scenario, const Summary& s)
{
  char buf[160];
  out << "scenario " << scenario << '\n';
  std::snprintf(buf, sizeof buf, "  samples                %zu (t = %.6g .. %.6g s)\n", s.samples, s.t_start, s.t_end);
  out << buf;
  std::snprintf(buf, sizeof buf, "  constraint drift       max %.3e m, mean %.3e m\n", s.max_constraint_drift,
                s.mean_constraint_drift);
  out << buf;
  std::snprintf(buf, sizeof buf, "  velocity residual      max %.3e m^2/s\n", s.max_velocity_residual);
  out << buf;
  if (!s.final_position_error.empty()) {
    out << "  final |e_c|           ";
    for (double e : s.final_position_error) {
      std::snprintf(buf, sizeof buf, " %.3e", e);
      out << buf;
    }
    out << " m\n";
  }
  if (s.settling_time) {
    std::snprintf(buf, sizeof buf, "  settling time          %.6g s\n", *s.settling_time);
    out << buf;
  } else if (!s.final_position_error.empty()) {
    out << "  settling time          not reached\n";
  }
  if (s.energy_drift) {
    std::snprintf(buf, sizeof buf, "  energy drift           %.3e (relative)\n", *s.energy_drift);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "  sigma_min(J)           initial %.6g, minimum %.6g at t = %.6g s\n",
                s.sigma_min_j_initial, s.sigma_min_j_min, s.sigma_min_j_min_time);
  out << buf;
}

void write_summary_kv(std::ostream& out, const std::string& scenario, const Summary& s)
{
  char buf[64];
  auto kv = [&](const std::string& key, double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << key << '=' << buf << '\n';
  };
  out << "scenario=" << scenario << '\n';
  out << "samples=" << s.samples << '\n';
  kv("t_start", s.t_start);
  kv("t_end", s.t_end);
  kv("max_constraint_drift", s.max_constraint_drift);
  kv("mean_constraint_drift", s.mean_constraint_drift);
  kv("max_velocity_residual", s.max_velocity_residual);
  for (std::size_t j = 0; j < s.final_position_error.size(); ++j)
    kv("final_ec" + std::to_string(j + 1), s.final_position_error[j]);
  for (std::size_t j = 0; j < s.final_velocity_error.size(); ++j)
    kv("final_ev" + std::to_string(j + 1), s.final_velocity_error[j]);
  if (s.settling_time)
    kv("settling_time", *s.settling_time);
  else if (!s.final_position_error.empty())
    out << "settling_time=absent\n";
  if (s.energy_drift)
    kv("energy_drift", *s.energy_drift);
  kv("sigma_min_j_initial", s.sigma_min_j_initial);
  kv("sigma_min_j_min", s.sigma_min_j_min);
  kv("sigma_min_j_min_time", s.sigma_min_j_min_time);
}

} // namespace sar::io
