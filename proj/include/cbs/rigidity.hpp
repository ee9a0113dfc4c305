#pragma once

#include <span>
#include <vector>

#include "cbs/beam_solver.hpp"
#include "cbs/geometry.hpp"

namespace cbs {

struct SmoothingParams {
  double h = 20.0;        // initial smoothing length, px
  int stride = 20;        // silhouette stride K
  double decay = 1.2;     // h_{k+1} = h_k / decay
  double h_final = 10.0;  // stop once h <= h_final

  void validate() const;
};

/// Influence length of each point given the arc gaps between consecutive
/// points: L_i = gap_{i-1}/2 + gap_i/2, ends take the single adjacent half.
/// `gaps` has one entry per consecutive pair, so the result has gaps+1 entries.
std::vector<double> support_lengths(std::span<const double> gaps);

/// Support rigidity D = L / h^4.
inline double rigidity(double length, double h) { return length / (h * h * h * h); }

/// Support compliance C = h^4 / L (infinite for L = 0).
double compliance(double length, double h);

/// Amplitude ratio of a cos(t/xi) excitation on a beam in an elastic medium
/// with smoothing length h.
inline double suppression(double xi, double h) {
  const double x4 = xi * xi * xi * xi;
  const double h4 = h * h * h * h;
  return x4 / (h4 + x4);
}

/// Control polygon plus per-point supports for one solve. Coincident
/// consecutive points are merged: their rigidities add and their gaps are
/// rigidity-weighted.
struct SupportedPolygon {
  ControlPolygon polygon;
  std::vector<SupportSpec> supports;
  std::vector<std::size_t> merged_index;  // input point -> polygon vertex
};

/// Builds supports with adaptive rigidity from the arc gaps along `points`.
/// End points carry no spring.
SupportedPolygon adaptive_supports(std::span<const Point2> points, std::span<const double> gaps, double h,
                                   double merge_tol = 1e-9);

/// Merges coincident consecutive points of an explicitly supported polygon.
SupportedPolygon merge_coincident(std::span<const Point2> points, std::span<const SupportSpec> supports,
                                  double merge_tol = 1e-9);

}  // namespace cbs
