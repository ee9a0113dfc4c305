#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "cbs/contour.hpp"

namespace shapes {

// Pixel (c, r) is set when its centre lies inside the polygon given in
// (column, row) coordinates.
inline cbs::RasterMask rasterize(const std::vector<cbs::Point2>& poly, int w, int h) {
  cbs::RasterMask m(w, h);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      bool in = false;
      for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const auto& a = poly[i];
        const auto& b = poly[j];
        if ((a.y > r) != (b.y > r) && c < (b.x - a.x) * (r - a.y) / (b.y - a.y) + a.x) in = !in;
      }
      m.set(c, r, in);
    }
  }
  return m;
}

inline std::vector<cbs::Point2> rect(double x0, double y0, double w, double h, double angle_deg = 0.0) {
  const cbs::Point2 c{x0 + w / 2, y0 + h / 2};
  std::vector<cbs::Point2> p{{x0, y0}, {x0 + w, y0}, {x0 + w, y0 + h}, {x0, y0 + h}};
  for (auto& q : p) q = cbs::rotate(q, angle_deg * std::numbers::pi / 180.0, c);
  return p;
}

// Rectangle whose top edge carries a round knob of radius `r` centred on it.
inline std::vector<cbs::Point2> tab_rect(double x0, double y0, double w, double h, double r) {
  std::vector<cbs::Point2> p{{x0, y0}};
  const double cx = x0 + w / 2;
  p.push_back({cx - 0.6 * r, y0});
  // Knob: neck, then most of a circle above the edge (rows grow downward).
  const double cy = y0 - 0.8 * r;
  const double start = std::numbers::pi / 2 + std::asin(0.6);
  for (int i = 0; i <= 200; ++i) {
    const double a = start + (2 * std::numbers::pi - 2 * std::asin(0.6)) * i / 200.0;
    p.push_back({cx + r * std::cos(a), cy + r * std::sin(a)});
  }
  p.push_back({cx + 0.6 * r, y0});
  p.push_back({x0 + w, y0});
  p.push_back({x0 + w, y0 + h});
  p.push_back({x0, y0 + h});
  return p;
}

// Rectangle whose top edge carries a circular cap of radius `r` spanning
// 2 * half_deg degrees of arc.
inline std::vector<cbs::Point2> cap_rect(double x0, double y0, double w, double h, double r, double half_deg) {
  const double half = half_deg * std::numbers::pi / 180.0;
  const double cx = x0 + w / 2;
  const double cy = y0 + r * std::cos(half);
  std::vector<cbs::Point2> p{{x0, y0}};
  for (int i = 0; i <= 200; ++i) {
    const double a = -std::numbers::pi / 2 - half + 2 * half * i / 200.0;
    p.push_back({cx + r * std::cos(a), cy + r * std::sin(a)});
  }
  p.push_back({x0 + w, y0});
  p.push_back({x0 + w, y0 + h});
  p.push_back({x0, y0 + h});
  return p;
}

// Maps a (column, row) position to library coordinates for a mask of height h.
inline cbs::Point2 to_lib(cbs::Point2 p, int h) { return {p.x, h - 1 - p.y}; }

}  // namespace shapes
