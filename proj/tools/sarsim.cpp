// sarsim: run scenarios, export configs, and run the verification suites.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sar/analysis.hpp"
#include "sar/config.hpp"
#include "sar/scenarios.hpp"
#include "sar/svg_plot.hpp"
#include "sar/trace_io.hpp"
#include "sar/verify.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct RunOptions
{
  std::string source;
  std::optional<double> dt;
  std::optional<double> duration;
  std::optional<bool> projection;
  std::optional<int> sample_every;
  std::string out_dir;
  bool plots = true;
};

sar::Scenario resolve_scenario(const std::string& source)
{
  if (fs::is_regular_file(source))
    return sar::config::load_scenario(source);
  if (fs::is_regular_file(source + ".toml"))
    return sar::config::load_scenario(source + ".toml");
  for (const auto& name : sar::builtin_scenario_names())
    if (name == source)
      return sar::builtin_scenario(name);
  std::string names;
  for (const auto& name : sar::builtin_scenario_names())
    names += (names.empty() ? "" : ", ") + name;
  throw sar::config::ConfigError("'" + source + "' is neither a config file nor a built-in scenario (" + names + ")");
}

std::ofstream open_out(const fs::path& p)
{
  std::ofstream out(p);
  if (!out)
    throw sar::Error("cannot write '" + p.string() + "'");
  return out;
}

int run(const RunOptions& opt)
{
  sar::Scenario sc = resolve_scenario(opt.source);
  if (opt.dt)
    sc.sim.dt = *opt.dt;
  if (opt.duration)
    sc.sim.duration = *opt.duration;
  if (opt.projection)
    sc.sim.projection = *opt.projection;
  if (opt.sample_every)
    sc.sim.sample_every = *opt.sample_every;
  if (!(sc.sim.dt > 0.0) || !(sc.sim.duration >= 0.0) || sc.sim.sample_every < 1)
    throw sar::config::ConfigError("sim: dt must be > 0, duration >= 0, sample_every >= 1");

  const fs::path dir = opt.out_dir.empty() ? fs::path("out") / sc.name : fs::path(opt.out_dir);
  fs::create_directories(dir);

  const sar::SystemState s0 = sc.initial_state();
  const auto setpoint = sc.make_setpoint();
  const sar::SimTrace trace = sar::integrate(sc.model, s0, sc.force_law(), s0.t + sc.sim.duration,
                                             sc.integrator_options());
  const sar::EdgeSetpoint* sp = setpoint ? &*setpoint : nullptr;
  const auto rows = sar::diagnose(sc.model, trace, sp);
  const sar::Summary summary = sar::summarize(rows, !sc.controlled);

  {
    auto out = open_out(dir / "trace.csv");
    sar::io::write_trace_csv(out, sc.model, trace, rows);
  }
  {
    auto out = open_out(dir / "summary.txt");
    sar::io::write_summary_text(out, sc.name, summary);
  }
  {
    auto out = open_out(dir / "summary.kv");
    sar::io::write_summary_kv(out, sc.name, summary);
  }
  if (opt.plots) {
    sar::plot::edge_coordinates(sc.model, trace, sp).save((dir / "edges.svg").string());
    sar::plot::constraint_drift(rows).save((dir / "drift.svg").string());
    sar::plot::sigma_min_j(rows).save((dir / "sigma_j.svg").string());
    sar::plot::energy(rows).save((dir / "energy.svg").string());
  }
  sar::io::write_summary_text(std::cout, sc.name, summary);
  std::cout << "outputs written to " << dir.string() << "\n";
  return kExitOk;
}

int verify(const std::string& suite)
{
  const auto checks = sar::verify::run_suite(suite);
  int failed = 0;
  for (const auto& c : checks) {
    std::printf("%s  %-9s %-58s measured=%-12.4g tol=%.1g\n", c.passed ? "PASS" : "FAIL", c.suite.c_str(),
                c.name.c_str(), c.measured, c.tolerance);
    failed += c.passed ? 0 : 1;
  }
  std::printf("%zu checks, %d failed\n", checks.size(), failed);
  return failed == 0 ? kExitOk : kExitFailure;
}

int export_scenario(const std::string& name, const std::string& path)
{
  sar::config::save_scenario(path, sar::builtin_scenario(name));
  std::cout << "wrote " << path << "\n";
  return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Planar articulated point-mass simulator with leader-follower control"};
  app.require_subcommand(1);

  RunOptions run_opt;
  double dt = 0.0, duration = 0.0;
  int sample_every = 1;
  bool projection = false;
  auto* run_cmd = app.add_subcommand("run", "Simulate a scenario and write trace, summary and plots");
  run_cmd->add_option("scenario", run_opt.source, "Config file (.toml suffix optional) or built-in name")->required();
  auto* dt_opt = run_cmd->add_option("--dt", dt, "Integrator step [s]");
  auto* dur_opt = run_cmd->add_option("--duration", duration, "Simulated time [s]");
  auto* proj_opt = run_cmd->add_flag("--projection,!--no-projection", projection, "Project onto the constraint manifold every step");
  auto* se_opt = run_cmd->add_option("--sample-every", sample_every, "Record every k-th step");
  run_cmd->add_option("--out", run_opt.out_dir, "Output directory (default out/<scenario name>)");
  run_cmd->add_flag("!--no-plots", run_opt.plots, "Skip SVG output");

  std::string suite;
  auto* verify_cmd = app.add_subcommand("verify", "Run invariant and oracle checks");
  verify_cmd->add_option("suite", suite, "graph | dynamics | control | oracle | all")
    ->required()
    ->check(CLI::IsMember(sar::verify::suite_names()));

  std::string export_name, export_path;
  auto* export_cmd = app.add_subcommand("export", "Write a built-in scenario as an editable config");
  export_cmd->add_option("name", export_name, "Built-in scenario name")->required();
  export_cmd->add_option("path", export_path, "Destination file")->required();

  auto* list_cmd = app.add_subcommand("list", "List built-in scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run_cmd) {
      if (*dt_opt)
        run_opt.dt = dt;
      if (*dur_opt)
        run_opt.duration = duration;
      if (*proj_opt)
        run_opt.projection = projection;
      if (*se_opt)
        run_opt.sample_every = sample_every;
      return run(run_opt);
    }
    if (*verify_cmd)
      return verify(suite);
    if (*export_cmd)
      return export_scenario(export_name, export_path);
    if (*list_cmd) {
      for (const auto& n : sar::builtin_scenario_names())
        std::cout << n << "\n";
      return kExitOk;
    }
  } catch (const sar::NotPositiveDefinite& e) {
    std::cerr << "dynamics failure at t = " << e.time() << ": " << e.what() << "\n";
    return kExitFailure;
  } catch (const sar::NonFiniteState& e) {
    std::cerr << "dynamics failure at t = " << e.time() << ": " << e.what() << "\n";
    return kExitFailure;
  } catch (const sar::config::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const sar::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
