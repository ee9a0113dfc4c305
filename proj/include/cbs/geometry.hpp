#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace cbs {

/// A point in pixel units. The library treats y as pointing up, so
/// "clockwise" means negative signed area.
struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point2 a, Point2 b) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }

/// Rotates `p` counterclockwise by `angle` radians about `center`.
Point2 rotate(Point2 p, double angle, Point2 center = {});

/// Ordered measured boundary points.
struct ContourSamples {
  std::vector<Point2> points;
  bool closed = false;

  std::size_t size() const { return points.size(); }
};

/// Removes consecutive duplicates (and the wrap-around duplicate of a closed
/// contour). Zero-length steps would otherwise produce degenerate frames.
ContourSamples dedup_consecutive(ContourSamples samples);

/// Also collapses out-and-back excursions (A, B, A -> A), which a boundary
/// trace produces along one-pixel-thick spurs.
ContourSamples remove_spurs(ContourSamples samples);

/// Shoelace area; negative for clockwise traversal.
double signed_area(std::span<const Point2> ring);

struct ControlPolygon {
  std::vector<Point2> points;

  std::size_t segment_count() const { return points.empty() ? 0 : points.size() - 1; }
};

/// Local basis of one polygon segment. `normal` is the tangent rotated by
/// -pi/2, i.e. (b, -a). `misalignment` is the clockwise turn to the next
/// segment and is empty for the last one.
struct SegmentFrame {
  double length = 0.0;
  Point2 tangent;
  Point2 normal;
  std::optional<double> misalignment;
};

/// Throws Error(ZeroLengthSegment) when two consecutive points coincide.
std::vector<SegmentFrame> build_frames(const ControlPolygon& polygon);

/// Clockwise-positive turning angles between consecutive frames, in (-pi, pi].
std::vector<double> misalignment_angles(std::span<const SegmentFrame> frames);

/// Signed normal offset from `a` to `b`, measured along `frame.normal`.
inline double signed_gap(Point2 a, const SegmentFrame& frame, Point2 b) {
  return dot(b - a, frame.normal);
}

/// Cumulative polyline length at each vertex (first entry 0).
std::vector<double> cumulative_length(std::span<const Point2> points);

}  // namespace cbs
