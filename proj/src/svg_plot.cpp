#include "sar/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

namespace sar::plot {

namespace {

constexpr double kPanelWidth = 420.0;
constexpr double kPanelHeight = 220.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 15.0;
constexpr double kMarginTop = 28.0;
constexpr double kMarginBottom = 40.0;
constexpr double kTitleHeight = 30.0;
constexpr std::size_t kMaxPoints = 2000;

std::string fmt(double x, const char* spec = "%.6g")
{
  char buf[40];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

std::string escape(const std::string& s)
{
  std::string out;
  for (char c : s) {
    switch (c) {
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '&': out += "&amp;"; break;
    default: out += c;
    }
  }
  return out;
}

double nice_step(double span, int target)
{
  if (!(span > 0.0))
    return 1.0;
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  return (frac < 1.5 ? 1.0 : frac < 3.5 ? 2.0 : frac < 7.5 ? 5.0 : 10.0) * mag;
}

struct Range
{
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v)
  {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }

  void finish()
  {
    if (!(lo <= hi)) {
      lo = 0.0;
      hi = 1.0;
    } else if (hi - lo < 1e-300 + 1e-12 * std::abs(hi)) {
      const double pad = std::abs(hi) > 0.0 ? 0.5 * std::abs(hi) : 1.0;
      lo -= pad;
      hi += pad;
    }
  }
};

void render_panel(std::ostream& out, const Panel& p, double x0, double y0)
{
  const double w = kPanelWidth - kMarginLeft - kMarginRight;
  const double h = kPanelHeight - kMarginTop - kMarginBottom;
  const double left = x0 + kMarginLeft;
  const double top = y0 + kMarginTop;

  auto ty = [&](double v) { return p.log_y ? std::log10(std::max(v, 1e-300)) : v; };
  Range xr, yr;
  for (const auto& s : p.series) {
    for (double v : s.x)
      xr.add(v);
    for (double v : s.y)
      if (!p.log_y || v > 0.0)
        yr.add(ty(v));
  }
  xr.finish();
  yr.finish();
  if (p.log_y) {
    yr.lo = std::floor(yr.lo);
    yr.hi = std::ceil(yr.hi);
    if (yr.hi <= yr.lo)
      yr.hi = yr.lo + 1.0;
  }

  auto px = [&](double v) { return left + (v - xr.lo) / (xr.hi - xr.lo) * w; };
  auto py = [&](double v) { return top + h - (ty(v) - yr.lo) / (yr.hi - yr.lo) * h; };

  out << "<g>\n";
  out << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(w) << "\" height=\"" << fmt(h)
      << "\" fill=\"white\" stroke=\"#444\"/>\n";
  out << "<text x=\"" << fmt(left + w / 2) << "\" y=\"" << fmt(y0 + 18) << "\" text-anchor=\"middle\" font-size=\"13\">"
      << escape(p.title) << "</text>\n";

  const double xs = nice_step(xr.hi - xr.lo, 6);
  for (double v = std::ceil(xr.lo / xs) * xs; v <= xr.hi + 1e-9 * xs; v += xs) {
    out << "<line x1=\"" << fmt(px(v)) << "\" y1=\"" << fmt(top) << "\" x2=\"" << fmt(px(v)) << "\" y2=\""
        << fmt(top + h) << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << fmt(px(v)) << "\" y=\"" << fmt(top + h + 14) << "\" text-anchor=\"middle\" font-size=\"10\">"
        << fmt(std::abs(v) < 1e-12 * xs ? 0.0 : v, "%g") << "</text>\n";
  }
  const double ys = p.log_y ? std::max(1.0, std::ceil((yr.hi - yr.lo) / 6.0)) : nice_step(yr.hi - yr.lo, 5);
  for (double v = std::ceil(yr.lo / ys) * ys; v <= yr.hi + 1e-9 * ys; v += ys) {
    const double yy = top + h - (v - yr.lo) / (yr.hi - yr.lo) * h;
    out << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(yy) << "\" x2=\"" << fmt(left + w) << "\" y2=\"" << fmt(yy)
        << "\" stroke=\"#ddd\"/>\n";
    const std::string label = p.log_y ? "1e" + fmt(v, "%.0f") : fmt(std::abs(v) < 1e-12 * ys ? 0.0 : v, "%g");
    out << "<text x=\"" << fmt(left - 5) << "\" y=\"" << fmt(yy + 3) << "\" text-anchor=\"end\" font-size=\"10\">"
        << label << "</text>\n";
  }
  out << "<text x=\"" << fmt(left + w / 2) << "\" y=\"" << fmt(top + h + 32)
      << "\" text-anchor=\"middle\" font-size=\"11\">" << escape(p.xlabel) << "</text>\n";
  out << "<text transform=\"translate(" << fmt(x0 + 14) << "," << fmt(top + h / 2)
      << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"11\">" << escape(p.ylabel) << "</text>\n";

  for (const auto& s : p.series) {
    const std::size_t n = std::min(s.x.size(), s.y.size());
    if (n == 0)
      continue;
    const std::size_t stride = std::max<std::size_t>(1, n / kMaxPoints);
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.4\"";
    if (s.dashed)
      out << " stroke-dasharray=\"6,4\"";
    out << " points=\"";
    for (std::size_t i = 0; i < n; i += stride) {
      if (p.log_y && !(s.y[i] > 0.0))
        continue;
      out << fmt(px(s.x[i]), "%.2f") << ',' << fmt(py(s.y[i]), "%.2f") << ' ';
    }
    if ((n - 1) % stride != 0 && (!p.log_y || s.y[n - 1] > 0.0))
      out << fmt(px(s.x[n - 1]), "%.2f") << ',' << fmt(py(s.y[n - 1]), "%.2f");
    out << "\"/>\n";
  }
  out << "</g>\n";
}

std::vector<double> times(const std::vector<DiagnosticsRow>& rows)
{
  std::vector<double> t;
  t.reserve(rows.size());
  for (const auto& r : rows)
    t.push_back(r.t);
  return t;
}

} // namespace

Figure::Figure(int rows, int cols, std::string title)
  : rows_(rows), cols_(cols), title_(std::move(title)), panels_(static_cast<std::size_t>(rows * cols))
{}

Panel& Figure::panel(int row, int col)
{
  return panels_.at(static_cast<std::size_t>(row * cols_ + col));
}

void Figure::write(std::ostream& out) const
{
  const double width = cols_ * kPanelWidth;
  const double height = kTitleHeight + rows_ * kPanelHeight;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\"" << fmt(height)
      << "\" viewBox=\"0 0 " << fmt(width) << ' ' << fmt(height) << "\" font-family=\"sans-serif\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"#fafafa\"/>\n";
  out << "<text x=\"" << fmt(width / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">" << escape(title_)
      << "</text>\n";
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c)
      render_panel(out, panels_[static_cast<std::size_t>(r * cols_ + c)], c * kPanelWidth,
                   kTitleHeight + r * kPanelHeight);
  out << "</svg>\n";
}

void Figure::save(const std::string& path) const
{
  std::ofstream out(path);
  if (!out)
    throw Error("cannot write '" + path + "'");
  write(out);
}

Figure edge_coordinates(const SarModel& model, const SimTrace& trace, const EdgeSetpoint* setpoint)
{
  const int m = model.edge_count();
  Figure fig(std::max(m, 1), 2, "Edge coordinates Q_e (solid) and desired (dashed)");
  std::vector<double> t;
  for (const auto& s : trace.samples)
    t.push_back(s.state.t);
  const char* axis[2] = {"x", "y"};
  for (int j = 0; j < m; ++j) {
    for (int a = 0; a < 2; ++a) {
      Panel& p = fig.panel(j, a);
      p.title = "r_e" + std::to_string(j + 1) + " " + axis[a];
      p.xlabel = "t [s]";
      p.ylabel = "m";
      Series actual{t, {}, "#1f4e9c", false};
      Series desired{t, {}, "#000000", true};
      for (const auto& s : trace.samples) {
        const Edge& e = model.graph().edge(j);
        actual.y.push_back(s.state.q(e.head, a) - s.state.q(e.tail, a));
        if (setpoint)
          desired.y.push_back((*setpoint)(s.state.t).position(j, a));
      }
      p.series.push_back(std::move(actual));
      if (setpoint)
        p.series.push_back(std::move(desired));
    }
  }
  return fig;
}

Figure constraint_drift(const std::vector<DiagnosticsRow>& rows)
{
  Figure fig(1, 1, "Constraint drift");
  Panel& p = fig.panel(0, 0);
  p.title = "max_j | |r_ej| - l_j |";
  p.xlabel = "t [s]";
  p.ylabel = "m";
  p.log_y = true;
  Series s{times(rows), {}, "#b22222", false};
  for (const auto& r : rows)
    s.y.push_back(r.constraint_drift);
  p.series.push_back(std::move(s));
  return fig;
}

Figure sigma_min_j(const std::vector<DiagnosticsRow>& rows)
{
  Figure fig(1, 1, "Smallest eigenvalue of J");
  Panel& p = fig.panel(0, 0);
  p.title = "sigma(J)";
  p.xlabel = "t [s]";
  p.ylabel = "sigma";
  Series s{times(rows), {}, "#2e7d32", false};
  for (const auto& r : rows)
    s.y.push_back(r.sigma_min_j);
  p.series.push_back(std::move(s));
  return fig;
}

Figure energy(const std::vector<DiagnosticsRow>& rows)
{
  Figure fig(1, 1, "Energy");
  Panel& p = fig.panel(0, 0);
  p.title = "kinetic (blue), potential (red), total (black)";
  p.xlabel = "t [s]";
  p.ylabel = "J";
  Series ke{times(rows), {}, "#1f4e9c", false};
  Series pe{times(rows), {}, "#b22222", false};
  Series total{times(rows), {}, "#000000", false};
  for (const auto& r : rows) {
    ke.y.push_back(r.energy.kinetic);
    pe.y.push_back(r.energy.potential);
    total.y.push_back(r.energy.total());
  }
  p.series.push_back(std::move(ke));
  p.series.push_back(std::move(pe));
  p.series.push_back(std::move(total));
  return fig;
}

} // namespace sar::plot
