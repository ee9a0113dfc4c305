#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "cbs/contour.hpp"
#include "cbs/error.hpp"

namespace cbs {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
constexpr std::size_t kMaxCandidates = 24;

struct LineFit {
  Point2 centroid;
  Point2 direction;  // unit, oriented along traversal
  bool valid = false;
};

// Closed polyline addressed by arc coordinate.
class ClosedArc {
 public:
  explicit ClosedArc(const std::vector<Point2>& pts) : pts_(pts), s_(pts.size() + 1, 0.0) {
    for (std::size_t i = 0; i < pts.size(); ++i) s_[i + 1] = s_[i] + distance(pts[i], pts[(i + 1) % pts.size()]);
  }

  double perimeter() const { return s_.back(); }
  double at(std::size_t i) const { return s_[i]; }

  // Indices whose arc coordinate lies in [from, to] (wrapping), in traversal order.
  std::vector<std::size_t> window(double from, double to) const {
    const double p = perimeter();
    std::vector<std::size_t> out;
    const double span = to - from;
    double start = std::fmod(from, p);
    if (start < 0) start += p;
    auto it = std::lower_bound(s_.begin(), s_.end() - 1, start);
    std::size_t i = static_cast<std::size_t>(it - s_.begin()) % pts_.size();
    double walked = s_[i] - start;
    if (walked < 0) walked += p;
    for (std::size_t n = 0; n < pts_.size() && walked <= span; ++n) {
      out.push_back(i);
      const std::size_t j = (i + 1) % pts_.size();
      walked += s_[i + 1] - s_[i];
      i = j;
    }
    return out;
  }

  LineFit fit(double from, double to) const {
    const auto idx = window(from, to);
    LineFit f;
    if (idx.size() < 3) return f;
    Point2 c{};
    for (std::size_t i : idx) c = c + pts_[i];
    c = (1.0 / static_cast<double>(idx.size())) * c;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i : idx) {
      const Point2 d = pts_[i] - c;
      sxx += d.x * d.x;
      sxy += d.x * d.y;
      syy += d.y * d.y;
    }
    const double angle = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
    Point2 dir{std::cos(angle), std::sin(angle)};
    if (dot(dir, pts_[idx.back()] - pts_[idx.front()]) < 0) dir = -1.0 * dir;
    f.centroid = c;
    f.direction = dir;
    f.valid = true;
    return f;
  }

 private:
  const std::vector<Point2>& pts_;
  std::vector<double> s_;
};

// Clockwise-positive angle from a to b.
double turn(Point2 a, Point2 b) {
  const Point2 n{a.y, -a.x};
  return std::atan2(dot(n, b), dot(a, b));
}

std::size_t circular_distance(std::size_t a, std::size_t b, std::size_t n) {
  const std::size_t d = a > b ? a - b : b - a;
  return std::min(d, n - d);
}

}  // namespace

std::vector<CornerCandidate> corner_candidates(const ContourSamples& samples, const CornerParams& params) {
  const auto& pts = samples.points;
  const std::size_t n = pts.size();
  if (n < 200) throw Error(ErrorCode::CornersNotFound, "contour has " + std::to_string(n) + " points, need 200");
  ClosedArc arc(pts);
  const double g = params.gap;
  const double f = params.flank;

  std::vector<double> error(n, -1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = arc.at(i);
    const LineFit before = arc.fit(s - g - f, s - g);
    const LineFit after = arc.fit(s + g, s + g + f);
    if (!before.valid || !after.valid) continue;
    const double corner_turn = turn(before.direction, after.direction);
    const double err = std::abs(corner_turn - 0.5 * std::numbers::pi);
    if (err > params.angle_tol_deg * kDeg) continue;
    // Each flank must itself be near-straight: compare its two halves.
    auto straight = [&](double from, double to) {
      const LineFit a = arc.fit(from, 0.5 * (from + to));
      const LineFit b = arc.fit(0.5 * (from + to), to);
      return a.valid && b.valid && std::abs(turn(a.direction, b.direction)) < params.straight_tol_deg * kDeg;
    };
    if (!straight(s - g - f, s - g) || !straight(s + g, s + g + f)) continue;
    error[i] = err;
  }

  // Group consecutive qualifying indices into runs; each run is one corner.
  std::vector<CornerCandidate> corners;
  std::size_t first_gap = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (error[i] < 0) {
      first_gap = i;
      break;
    }
  }
  if (first_gap == n) return {};
  for (std::size_t k = 0; k < n;) {
    const std::size_t i = (first_gap + k) % n;
    if (error[i] < 0) {
      ++k;
      continue;
    }
    std::vector<std::size_t> run;
    while (k < n && error[(first_gap + k) % n] >= 0) {
      run.push_back((first_gap + k) % n);
      ++k;
    }
    // Localize at the apex: the point that sticks out furthest along the
    // outward bisector of the two flank lines fitted around the run's middle.
    const std::size_t mid = run[run.size() / 2];
    const double s = arc.at(mid);
    const LineFit before = arc.fit(s - g - f, s - g);
    const LineFit after = arc.fit(s + g, s + g + f);
    const Point2 bisector = before.direction - after.direction;
    std::size_t best = mid;
    double best_p = dot(pts[mid], bisector);
    const std::size_t reach = static_cast<std::size_t>(g) + 1;
    for (std::size_t off = 0; off < run.size() + 2 * reach; ++off) {
      const std::size_t idx = (run.front() + n - reach + off) % n;
      const double p = dot(pts[idx], bisector);
      if (p > best_p) {
        best_p = p;
        best = idx;
      }
    }
    double run_error = error[run.front()];
    for (std::size_t idx : run) run_error = std::min(run_error, error[idx]);
    corners.push_back({best, run_error, before.direction, after.direction});
  }

  return corners;
}

std::array<std::size_t, 4> detect_corners(const ContourSamples& samples, const CornerParams& params) {
  const auto& pts = samples.points;
  const std::size_t n = pts.size();
  std::vector<CornerCandidate> corners = corner_candidates(samples, params);
  const double g = params.gap;
  const double f = params.flank;

  // Keep the strongest candidates, then pick the four that form the largest
  // quadrilateral whose interior angles all stay near 90 degrees.
  std::sort(corners.begin(), corners.end(), [](const CornerCandidate& a, const CornerCandidate& b) {
    return a.error != b.error ? a.error < b.error : a.index < b.index;
  });
  if (corners.size() > kMaxCandidates) corners.resize(kMaxCandidates);
  std::sort(corners.begin(), corners.end(),
            [](const CornerCandidate& a, const CornerCandidate& b) { return a.index < b.index; });
  const std::size_t m = corners.size();
  const std::size_t min_sep = static_cast<std::size_t>(std::ceil(g + f));
  const double tol = params.quad_tol_deg * kDeg;
  const double flank_tol = params.flank_tol_deg * kDeg;

  double best_area = 0.0;
  double best_error = 0.0;
  std::array<std::size_t, 4> best{};
  bool found = false;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      for (std::size_t c = b + 1; c < m; ++c) {
        for (std::size_t d = c + 1; d < m; ++d) {
          const std::array<std::size_t, 4> pick{a, b, c, d};
          std::array<Point2, 4> q;
          bool ok = true;
          double err = 0.0;
          for (std::size_t k = 0; k < 4; ++k) {
            q[k] = pts[corners[pick[k]].index];
            err += corners[pick[k]].error;
            ok = ok && circular_distance(corners[pick[k]].index, corners[pick[(k + 1) % 4]].index, n) >= min_sep;
          }
          if (!ok) continue;
          for (std::size_t k = 0; k < 4 && ok; ++k) {
            const CornerCandidate& cc = corners[pick[k]];
            const Point2 in = q[k] - q[(k + 3) % 4];
            const Point2 out = q[(k + 1) % 4] - q[k];
            ok = std::abs(turn(in, out) - 0.5 * std::numbers::pi) <= tol &&
                 std::abs(turn(in, cc.incoming)) <= flank_tol && std::abs(turn(cc.outgoing, out)) <= flank_tol;
          }
          if (!ok) continue;
          const double area = -signed_area(q);
          if (!found || area > best_area * (1.0 + 1e-9) ||
              (area >= best_area * (1.0 - 1e-9) && err < best_error)) {
            found = true;
            best_area = area;
            best_error = err;
            for (std::size_t k = 0; k < 4; ++k) best[k] = corners[pick[k]].index;
          }
        }
      }
    }
  }
  if (!found) {
    throw Error(ErrorCode::CornersNotFound,
                std::to_string(m) + " corner candidates but no four of them form a quadrilateral");
  }
  return best;
}

PieceContour split_sides(const ContourSamples& samples, const std::array<std::size_t, 4>& corners) {
  const std::size_t n = samples.points.size();
  // Start at the top-left corner (smallest x - y with y up).
  std::size_t first = 0;
  for (std::size_t k = 1; k < 4; ++k) {
    const Point2 a = samples.points[corners[k]];
    const Point2 b = samples.points[corners[first]];
    if (a.x - a.y < b.x - b.y) first = k;
  }
  const std::size_t shift = corners[first];
  PieceContour out;
  out.samples.closed = true;
  out.samples.points.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.samples.points[i] = samples.points[(i + shift) % n];
  for (std::size_t k = 0; k < 4; ++k) out.corner_indices[k] = (corners[(first + k) % 4] + n - shift) % n;
  for (std::size_t k = 0; k < 4; ++k) {
    const std::size_t a = out.corner_indices[k];
    const std::size_t b = k + 1 < 4 ? out.corner_indices[k + 1] : n;
    ContourSamples side;
    side.closed = false;
    for (std::size_t i = a; i <= b; ++i) side.points.push_back(out.samples.points[i % n]);
    out.sides[k] = std::move(side);
  }
  return out;
}

}  // namespace cbs
