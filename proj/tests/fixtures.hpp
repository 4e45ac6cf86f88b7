#pragma once

#include <cmath>

#include "sar/model.hpp"

namespace fixtures {

inline sar::Arborescence single_edge() { return sar::Arborescence(2, {{0, 1}}); }
inline sar::Arborescence two_link() { return sar::Arborescence(3, {{0, 1}, {0, 2}}); }
inline sar::Arborescence five_link() { return sar::Arborescence(6, {{0, 1}, {0, 2}, {0, 3}, {3, 4}, {3, 5}}); }

inline sar::IntMatrix five_link_d()
{
  sar::IntMatrix d(6, 5);
  d << -1, -1, -1, 0, 0,
        1, 0, 0, 0, 0,
        0, 1, 0, 0, 0,
        0, 0, 1, -1, -1,
        0, 0, 0, 1, 0,
        0, 0, 0, 0, 1;
  return d;
}

inline sar::IntMatrix five_link_h()
{
  sar::IntMatrix h(5, 6);
  h << 0, 1, 0, 0, 0, 0,
       0, 0, 1, 0, 0, 0,
       0, 0, 0, 1, 1, 1,
       0, 0, 0, 0, 1, 0,
       0, 0, 0, 0, 0, 1;
  return h;
}

inline sar::SarModel dumbbell_model(double ma, double mb, double l)
{
  return sar::SarModel(single_edge(), Eigen::Vector2d(ma, mb), Eigen::VectorXd::Constant(1, l));
}

/// Rod from (0, 0) to (0, -l), at rest.
inline sar::SystemState hanging(double l)
{
  sar::SystemState s{0.0, sar::PlanarMatrix::Zero(2, 2), sar::PlanarMatrix::Zero(2, 2)};
  s.q(1, 1) = -l;
  return s;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

} // namespace fixtures
