#include <doctest.h>

#include <sstream>

#include "sar/analysis.hpp"
#include "sar/scenarios.hpp"
#include "sar/svg_plot.hpp"
#include "sar/trace_io.hpp"

using namespace sar;

namespace {

std::vector<std::string> split(const std::string& line)
{
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ','))
    out.push_back(cell);
  return out;
}

} // namespace

TEST_CASE("trace CSV layout")
{
  const Scenario two = two_link_scenario();
  const SimTrace tr = integrate(two.model, two.initial_state(), two.force_law(), 0.01, two.integrator_options());
  const EdgeSetpoint sp = *two.make_setpoint();
  std::ostringstream out;
  io::write_trace_csv(out, two.model, tr, diagnose(two.model, tr, &sp));

  std::istringstream in(out.str());
  std::string header, row;
  std::getline(in, header);
  const auto cols = split(header);
  CHECK(cols == io::trace_columns(two.model, true));
  CHECK(cols.front() == "t");
  CHECK(cols[1] == "x1");
  CHECK(cols[2] == "y1");
  CHECK(cols[7] == "vx1");
  CHECK(cols[13] == "qe1_x");
  CHECK(cols[17] == "lambda1");
  CHECK(cols[19] == "ec1");

  int rows = 0;
  while (std::getline(in, row)) {
    CHECK(split(row).size() == cols.size());
    ++rows;
  }
  CHECK(rows == 11);
  CHECK(out.str().find("\n0,0,0,0,-0.10000000000000001,") != std::string::npos);

  const Scenario db = dumbbell_scenario();
  CHECK(io::trace_columns(db.model, false).size() == 1 + 4 + 4 + 2 + 1 + 2 + 2 + 1 + 1);
}

TEST_CASE("summary outputs")
{
  const Scenario db = dumbbell_scenario();
  const SimTrace tr = integrate(db.model, db.initial_state(), zero_force(), 0.1);
  const Summary s = summarize(diagnose(db.model, tr), true);
  std::ostringstream kv, text;
  io::write_summary_kv(kv, db.name, s);
  io::write_summary_text(text, db.name, s);
  CHECK(kv.str().find("scenario=dumbbell\n") != std::string::npos);
  CHECK(kv.str().find("energy_drift=") != std::string::npos);
  CHECK(kv.str().find("settling_time") == std::string::npos);
  CHECK(text.str().find("dumbbell") != std::string::npos);
}

TEST_CASE("SVG figures")
{
  const Scenario five = five_link_scenario();
  const SimTrace tr = integrate(five.model, five.initial_state(), five.force_law(), 0.2, five.integrator_options());
  const EdgeSetpoint sp = *five.make_setpoint();
  const auto rows = diagnose(five.model, tr, &sp);

  std::ostringstream svg;
  plot::edge_coordinates(five.model, tr, &sp).write(svg);
  const std::string s = svg.str();
  CHECK(s.rfind("<?xml", 0) == 0);
  CHECK(s.find("</svg>") != std::string::npos);
  std::size_t polylines = 0, dashed = 0;
  for (auto p = s.find("<polyline"); p != std::string::npos; p = s.find("<polyline", p + 1))
    ++polylines;
  for (auto p = s.find("stroke-dasharray"); p != std::string::npos; p = s.find("stroke-dasharray", p + 1))
    ++dashed;
  CHECK(polylines == 20);
  CHECK(dashed == 10);

  for (const auto& fig : {plot::constraint_drift(rows), plot::sigma_min_j(rows), plot::energy(rows)}) {
    std::ostringstream o;
    fig.write(o);
    CHECK(o.str().find("<polyline") != std::string::npos);
    CHECK(o.str().find("nan") == std::string::npos);
  }
}
