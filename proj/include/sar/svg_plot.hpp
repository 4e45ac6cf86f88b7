#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sar/analysis.hpp"
#include "sar/control.hpp"
#include "sar/dynamics.hpp"

namespace sar::plot {

struct Series
{
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f4e9c";
  bool dashed = false;
};

struct Panel
{
  std::string title;
  std::string xlabel;
  std::string ylabel;
  bool log_y = false;
  std::vector<Series> series;
};

/// Grid of line-chart panels rendered as a static SVG.
class Figure
{
public:
  Figure(int rows, int cols, std::string title);

  Panel& panel(int row, int col);
  void write(std::ostream& out) const;
  void save(const std::string& path) const;

private:
  int rows_;
  int cols_;
  std::string title_;
  std::vector<Panel> panels_;
};

/// One panel per edge coordinate, laid out like Q_e (rows = edges, columns = x, y),
/// with the desired trajectory dashed when a setpoint is given.
Figure edge_coordinates(const SarModel& model, const SimTrace& trace, const EdgeSetpoint* setpoint);

Figure constraint_drift(const std::vector<DiagnosticsRow>& rows);
Figure sigma_min_j(const std::vector<DiagnosticsRow>& rows);
Figure energy(const std::vector<DiagnosticsRow>& rows);

} // namespace sar::plot
