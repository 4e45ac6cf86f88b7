#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "sar/analysis.hpp"
#include "sar/config.hpp"
#include "sar/trace_io.hpp"

using namespace sar;
using config::ConfigError;

namespace {

std::string exported(const Scenario& s)
{
  std::ostringstream out;
  config::write_scenario(out, s);
  return out.str();
}

Scenario from_text(const std::string& text)
{
  return config::scenario_from_document(config::parse(text));
}

int error_line(const std::string& text)
{
  try {
    from_text(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  FAIL("no ConfigError for:\n" << text);
  return -1;
}

std::string trace_csv(const Scenario& s, double duration)
{
  const SimTrace tr = integrate(s.model, s.initial_state(), s.force_law(), duration, s.integrator_options());
  const auto sp = s.make_setpoint();
  std::ostringstream out;
  io::write_trace_csv(out, s.model, tr, diagnose(s.model, tr, sp ? &*sp : nullptr));
  return out.str();
}

const char* kMinimal = R"(
[graph]
edges = [[1, 2]]
[model]
masses = [1, 2]
lengths = [0.5]
[initial]
edge_directions = [[1, 0]]
)";

} // namespace

TEST_CASE("parser basics")
{
  const config::Document d = config::parse(R"(name = "x"  # trailing comment
[a]
n = -1.5e-3
b = true
s = "hi"
arr = [
  [1, 2],   # nested rows
  [3, 4],
]
)");
  CHECK(std::get<std::string>(d.at("").at("name").data) == "x");
  CHECK(std::get<double>(d.at("a").at("n").data) == -1.5e-3);
  CHECK(std::get<bool>(d.at("a").at("b").data));
  const auto& arr = std::get<config::Array>(d.at("a").at("arr").data);
  REQUIRE(arr.size() == 2);
  CHECK(std::get<double>(std::get<config::Array>(arr[1].data)[0].data) == 3.0);
  CHECK(d.at("a").at("arr").line == 6);

  CHECK_THROWS_AS(config::parse("a = 1\na = 2\n"), ConfigError);
  CHECK_THROWS_AS(config::parse("[s]\n[s]\n"), ConfigError);
  CHECK_THROWS_AS(config::parse("a = [1, 2\n"), ConfigError);
  CHECK_THROWS_AS(config::parse("a = 1 2\n"), ConfigError);
}

TEST_CASE("minimal config uses defaults")
{
  const Scenario s = from_text(kMinimal);
  CHECK(s.name == "custom");
  CHECK_FALSE(s.controlled);
  CHECK(s.model.gravity() == kDefaultGravity);
  CHECK(s.sim.dt == 1e-3);
  CHECK(s.sim.duration == 10.0);
  CHECK(s.initial_state().q.row(1) == Eigen::RowVector2d(0.5, 0));
}

TEST_CASE("config errors carry line numbers")
{
  CHECK(error_line(std::string(kMinimal) + "[sim]\nbogus = 1\n") == 10);
  CHECK(error_line(std::string(kMinimal) + "[extra]\nx = 1\n") == 10);
  CHECK(error_line("[graph]\nedges = [[1, 2], [2, 1]]\n[model]\nmasses = [1, 1]\nlengths = [1, 1]\n") == 2);
  CHECK(error_line("[graph]\nedges = [[1, 2]]\n[model]\nmasses = [1, -1]\nlengths = [1]\n") == 4);
  CHECK(error_line(std::string(kMinimal) + "[sim]\ndt = 0\n") == 10);
  CHECK(error_line(std::string(kMinimal) + "[controller]\nkc = 1\n[setpoint]\nrows = [[0.4, 0]]\n") == 12);
  CHECK_THROWS_AS(from_text("[graph]\nedges = [[1, 2]]\n"), ConfigError);

  try {
    from_text(std::string(kMinimal) + "[sim]\ndt = \"fast\"\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("[sim] dt") != std::string::npos);
  }
}

TEST_CASE("named leader forces")
{
  const std::string base = R"(
[graph]
edges = [[1, 2], [1, 3]]
[model]
masses = [0.7, 0.2, 0.2]
lengths = [0.1, 0.1]
[setpoint]
rows = [[-0.1, 0], [0.1, 0]]
[initial]
edge_directions = [[0, -1], [0, -1]]
[controller]
)";
  const Scenario two = from_text(base + "leader_force = \"two_link\"\n");
  CHECK(two.controlled);
  CHECK(two.controller.leader(0.0).isApprox(two_link_scenario().controller.leader(0.0)));
  CHECK(from_text(base + "leader_force = \"zero\"\n").controller.leader(1.0).isZero());
  CHECK_THROWS_AS(from_text(base + "leader_force = \"wobble\"\n"), ConfigError);
  CHECK_THROWS_AS(from_text(base + "leader_force = \"zero\"\nleader_force_x = [1, 1, 0]\n"), ConfigError);
}

TEST_CASE("export round trip is idempotent")
{
  for (const auto& name : builtin_scenario_names()) {
    const std::string first = exported(builtin_scenario(name));
    const std::string second = exported(from_text(first));
    CHECK(first == second);
  }
  CHECK(exported(five_link_scenario()).find("masses = [0.7, 0.2, 0.2, 0.5, 0.1, 0.1]") != std::string::npos);
}

TEST_CASE("exported config re-runs to a byte-identical trace")
{
  const auto path = std::filesystem::temp_directory_path() / "sar_roundtrip_two_link.toml";
  config::save_scenario(path.string(), two_link_scenario());
  const Scenario loaded = config::load_scenario(path.string());
  std::filesystem::remove(path);
  CHECK(trace_csv(loaded, 1.0) == trace_csv(two_link_scenario(), 1.0));
  CHECK(trace_csv(five_link_scenario(), 0.5) == trace_csv(from_text(exported(five_link_scenario())), 0.5));
  CHECK_THROWS_AS(config::load_scenario("/nonexistent/file.toml"), ConfigError);
}

TEST_CASE("shortest number formatting")
{
  for (double x : {0.1, 1.0 / 3.0, 9.81, -2.5e-7, 6.283185307179586, 0.0, 1e21})
    CHECK(std::stod(config::format_number(x)) == x);
  CHECK(config::format_number(0.7) == "0.7");
  CHECK(config::format_number(10.0) == "10");
}
