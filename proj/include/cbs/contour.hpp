#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "cbs/beam_solver.hpp"
#include "cbs/geometry.hpp"
#include "cbs/rigidity.hpp"

namespace cbs {

/// Row-major binary image; row 0 is the top row of the picture.
struct RasterMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  RasterMask() = default;
  RasterMask(int w, int h) : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}

  bool get(int col, int row) const {
    if (col < 0 || row < 0 || col >= width || row >= height) return false;
    return bits[static_cast<std::size_t>(row) * width + col] != 0;
  }
  void set(int col, int row, bool v) { bits[static_cast<std::size_t>(row) * width + col] = v ? 1 : 0; }
};

/// Maps pixel (col, row) to library coordinates (y up).
inline Point2 pixel_to_point(const RasterMask& mask, int col, int row) {
  return {static_cast<double>(col), static_cast<double>(mask.height - 1 - row)};
}

/// Number of 8-connected foreground components.
int count_components(const RasterMask& mask);

/// Moore-neighbour trace of the outer boundary, returned clockwise (y up).
/// Throws EmptyMask or MultipleComponents.
ContourSamples trace_boundary(const RasterMask& mask);

struct CornerParams {
  double gap = 6.0;               // arc excluded on each side of the candidate, px
  double flank = 40.0;           // length of each flanking window, px
  double straight_tol_deg = 15.0; // max turning inside a flank
  double angle_tol_deg = 30.0;    // allowed deviation of the corner turn from 90 deg
  double quad_tol_deg = 10.0;     // allowed deviation of the corner quadrilateral's angles from 90 deg
  double flank_tol_deg = 20.0;    // allowed angle between a corner's flanks and the quadrilateral's edges
};

struct CornerCandidate {
  std::size_t index = 0;
  double error = 0.0;  // |turn - 90 deg|, radians
  Point2 incoming;     // unit direction of the flank before the corner
  Point2 outgoing;     // unit direction of the flank after it
};

/// One candidate per run of points whose flanks are straight and turn by
/// roughly 90 degrees clockwise, placed at the run's apex.
std::vector<CornerCandidate> corner_candidates(const ContourSamples& samples, const CornerParams& params = {});

/// Four corner indices in increasing (clockwise) order: the candidates whose
/// quadrilateral has near-right angles, whose flanks run along its edges,
/// and whose area is largest.
/// Throws CornersNotFound if fewer than four qualify.
std::array<std::size_t, 4> detect_corners(const ContourSamples& samples, const CornerParams& params = {});

struct PieceContour {
  ContourSamples samples;                 // closed, clockwise, starting at the first corner
  std::array<std::size_t, 4> corner_indices{};
  std::array<ContourSamples, 4> sides;    // open, each includes both end corners
};

/// Rotates the contour to start at the top-left corner and cuts it into four
/// sides, numbered clockwise from there.
PieceContour split_sides(const ContourSamples& samples, const std::array<std::size_t, 4>& corners);

struct RefinementState {
  int iteration = 0;
  double h = 0.0;
  ControlPolygon control;                // one control point per entry of b_order
  std::vector<std::size_t> b_order;      // measured-point index behind each control point
  std::vector<double> gaps;              // signed gap per control point
  std::vector<std::size_t> silhouette;   // sorted measured-point indices of silhouette points
};

/// Every K-th measured point plus both ends, with the stride halved locally
/// until every misalignment angle is below 90 degrees.
RefinementState init_silhouette(const ContourSamples& side, int stride);

inline constexpr std::size_t kCandidatesPerSilhouetteSegment = 200;

/// Projects every measured point onto the solved spline (nearest of 200
/// equidistant candidates per silhouette segment, searching the three
/// silhouette segments around its previous projection), renumbers by arc
/// coordinate and recomputes gaps.
RefinementState project_and_renumber(const RefinementState& state, const SplineSolution& solution,
                                     const ContourSamples& all_b);

/// Solves the beam chain for the current state with adaptive rigidity.
SplineSolution solve_state(const RefinementState& state, double h);

struct SideFit {
  SplineSolution solution;
  CurvatureProfile profile;
  RefinementState state;          // state used for the final solve
  std::vector<double> h_history;  // h of every solve, in order
};

/// Runs the silhouette initialization and the solve / project / shrink-h loop.
SideFit refine_side(const ContourSamples& side, const SmoothingParams& params);

/// Number of solves refine_side performs for the given schedule.
int schedule_solves(double h0, double h_final, double decay);

struct PieceFit {
  PieceContour contour;
  std::array<SideFit, 4> sides;
};

PieceFit process_piece(const ContourSamples& outline, const SmoothingParams& params,
                       const CornerParams& corner_params = {});

}  // namespace cbs
