#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "cbs/geometry.hpp"

namespace cbs {

/// Beam section state: deflection W (along the segment normal), rotation
/// theta (clockwise positive), bending moment M and shear force Q. Bending
/// rigidity is normalized to 1, so M is in 1/px and Q in 1/px^2.
struct StateVector {
  double W = 0.0;
  double theta = 0.0;
  double M = 0.0;
  double Q = 0.0;

  friend bool operator==(const StateVector&, const StateVector&) = default;
};

/// Elastic tie between the beam and one measured point. `compliance` is
/// 1/rigidity in px^4; zero forces interpolation, +infinity means no tie.
struct SupportSpec {
  double gap = 0.0;
  double compliance = 0.0;
};

/// W = M = 0 at both ends of the chain (pinned, free to rotate).
enum class BoundaryCondition { PinnedFree };

/// Propagates a state along an unloaded beam by length t.
StateVector transfer(const StateVector& state, double t);

struct SegmentSolution {
  StateVector start;
  StateVector end;
  SegmentFrame frame;
  Point2 origin;
};

class SplineSolution {
 public:
  SplineSolution() = default;
  SplineSolution(std::vector<SegmentSolution> segments, double residual);

  std::size_t segment_count() const { return segments_.size(); }
  const SegmentSolution& segment(std::size_t i) const;
  std::span<const SegmentSolution> segments() const { return segments_; }

  /// Max absolute residual of the assembled linear system.
  double residual() const { return residual_; }

  /// Point on segment `i` at local coordinate t in [0, l_i].
  Point2 evaluate(std::size_t i, double t) const;

  /// First and second derivatives of the position with respect to t.
  void derivatives(std::size_t i, double t, Point2& d1, Point2& d2) const;

  /// Signed curvature (counterclockwise positive) at local coordinate t.
  double curvature(std::size_t i, double t) const;

  /// Total length of the underlying control polygon.
  double chord_length() const { return offsets_.empty() ? 0.0 : offsets_.back(); }

  /// Evaluates at a polygon-chord parameter u in [0, chord_length()].
  Point2 point_at(double u) const;

  /// Polygon-chord parameter of the start of segment i (size = count + 1).
  std::span<const double> offsets() const { return offsets_; }

  /// Dense polyline of the spline, `per_segment` intervals per segment.
  std::vector<Point2> sample(std::size_t per_segment = 8) const;

 private:
  std::vector<SegmentSolution> segments_;
  std::vector<double> offsets_;
  double residual_ = 0.0;
};

/// Solves the corotational beam chain over `polygon`. `supports` holds one
/// entry per polygon point; the two end entries are ignored because the
/// boundary condition pins those points.
SplineSolution assemble_and_solve(const ControlPolygon& polygon, std::span<const SupportSpec> supports,
                                  BoundaryCondition bc = BoundaryCondition::PinnedFree);

struct CurvatureProfile {
  double length = 0.0;
  std::vector<double> s;
  std::vector<double> kappa;

  std::size_t size() const { return kappa.size(); }
  double step() const { return s.size() > 1 ? length / static_cast<double>(s.size() - 1) : 0.0; }
};

inline constexpr std::size_t kDefaultSamplesPerSegment = 16;
inline constexpr std::size_t kDefaultProfileSamples = 1024;

/// Arc length by composite Simpson and curvature from analytic derivatives,
/// resampled onto `profile_samples` uniform arc-length points.
CurvatureProfile curvature_profile(const SplineSolution& solution,
                                   std::size_t samples_per_segment = kDefaultSamplesPerSegment,
                                   std::size_t profile_samples = kDefaultProfileSamples);

/// Builds a uniform profile from (s, kappa) pairs with non-decreasing s.
CurvatureProfile resample_profile(std::span<const double> s, std::span<const double> kappa, std::size_t samples);

}  // namespace cbs
