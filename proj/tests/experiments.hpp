#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "cbs/beam_solver.hpp"
#include "cbs/rigidity.hpp"

namespace experiment {

// Straight beam over gaps delta * cos(x / xi) with adaptive rigidity at
// smoothing length h; returns the solved amplitude over the input amplitude,
// fitted on the middle half of the beam.
inline double suppression_ratio(double xi, double h, double delta = 2.0) {
  const double length = 24.0 * std::numbers::pi * xi;
  const double dx = std::numbers::pi * xi / 48.0;
  const int n = static_cast<int>(std::lround(length / dx));
  std::vector<cbs::Point2> pts;
  std::vector<double> gaps;
  for (int i = 0; i <= n; ++i) {
    const double x = i * dx;
    pts.push_back({x, 0.0});
    gaps.push_back(delta * std::cos(x / xi));
  }
  const auto sp = cbs::adaptive_supports(pts, gaps, h);
  const auto sol = cbs::assemble_and_solve(sp.polygon, sp.supports);
  double cc = 0, ss = 0, cs = 0, wc = 0, ws = 0;
  for (std::size_t i = 0; i < sol.segment_count(); ++i) {
    const double x = sp.polygon.points[i + 1].x;
    if (x < 0.25 * length || x > 0.75 * length) continue;
    const double w = sol.segment(i).end.W;
    const double c = std::cos(x / xi), s = std::sin(x / xi);
    cc += c * c;
    ss += s * s;
    cs += c * s;
    wc += w * c;
    ws += w * s;
  }
  const double det = cc * ss - cs * cs;
  const double a = (wc * ss - ws * cs) / det;
  const double b = (ws * cc - wc * cs) / det;
  return std::hypot(a, b) / delta;
}

}  // namespace experiment
