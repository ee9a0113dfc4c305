#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "cbs/contour.hpp"
#include "cbs/error.hpp"

namespace cbs {

namespace {

ControlPolygon polygon_from(const ContourSamples& side, const std::vector<std::size_t>& idx) {
  ControlPolygon poly;
  poly.points.reserve(idx.size());
  for (std::size_t i : idx) poly.points.push_back(side.points[i]);
  return poly;
}

}  // namespace

RefinementState init_silhouette(const ContourSamples& side, int stride) {
  const std::size_t n = side.points.size();
  if (stride < 2 || n <= 2 * static_cast<std::size_t>(stride)) {
    throw Error(ErrorCode::StrideTooCoarse,
                "side has " + std::to_string(n) + " points; stride " + std::to_string(stride) + " needs more than " +
                    std::to_string(2 * stride));
  }
  const std::size_t k = static_cast<std::size_t>(stride);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < n - 1; i += k) idx.push_back(i);
  idx.push_back(n - 1);

  // Drop points that coincide with their predecessor (repeated pixels).
  auto drop_coincident = [&] {
    std::vector<std::size_t> kept{idx.front()};
    for (std::size_t j = 1; j < idx.size(); ++j) {
      if (side.points[idx[j]] == side.points[kept.back()]) {
        if (j + 1 == idx.size()) kept.back() = idx[j];
        continue;
      }
      kept.push_back(idx[j]);
    }
    idx = std::move(kept);
  };

  for (;;) {
    drop_coincident();
    if (idx.size() < 2) throw Error(ErrorCode::StrideTooCoarse, "side collapses to a single point");
    const auto frames = build_frames(polygon_from(side, idx));
    std::vector<bool> split(idx.size() - 1, false);
    bool violated = false;
    for (std::size_t j = 0; j + 1 < frames.size(); ++j) {
      if (std::abs(*frames[j].misalignment) < 0.5 * std::numbers::pi) continue;
      violated = true;
      bool any = false;
      for (std::size_t seg : {j, j + 1}) {
        if (idx[seg + 1] - idx[seg] > 1) {
          split[seg] = true;
          any = true;
        }
      }
      if (!any) {
        throw Error(ErrorCode::StrideTooCoarse,
                    "misalignment at measured point " + std::to_string(idx[j + 1]) + " stays above 90 degrees");
      }
    }
    if (!violated) break;
    std::vector<std::size_t> refined;
    for (std::size_t seg = 0; seg + 1 < idx.size(); ++seg) {
      refined.push_back(idx[seg]);
      if (split[seg]) refined.push_back((idx[seg] + idx[seg + 1]) / 2);
    }
    refined.push_back(idx.back());
    idx = std::move(refined);
  }

  RefinementState state;
  state.iteration = 0;
  state.h = static_cast<double>(stride);
  state.control = polygon_from(side, idx);
  state.b_order = idx;
  state.gaps.assign(idx.size(), 0.0);
  state.silhouette = idx;
  return state;
}

SplineSolution solve_state(const RefinementState& state, double h) {
  const SupportedPolygon sp = adaptive_supports(state.control.points, state.gaps, h);
  return assemble_and_solve(sp.polygon, sp.supports, BoundaryCondition::PinnedFree);
}

RefinementState project_and_renumber(const RefinementState& state, const SplineSolution& solution,
                                     const ContourSamples& all_b) {
  const std::size_t n = all_b.points.size();
  const std::vector<double> u_ctrl = cumulative_length(state.control.points);
  const double total = solution.chord_length();

  // Silhouette boundaries on the current spline.
  std::vector<double> bounds{0.0, total};
  for (std::size_t k = 0; k < state.b_order.size(); ++k) {
    if (std::binary_search(state.silhouette.begin(), state.silhouette.end(), state.b_order[k])) {
      bounds.push_back(std::clamp(u_ctrl[k], 0.0, total));
    }
  }
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-9; }),
               bounds.end());
  const std::size_t sil_segments = bounds.size() - 1;

  constexpr std::size_t kc = kCandidatesPerSilhouetteSegment;
  std::vector<Point2> cand_pos(sil_segments * kc);
  std::vector<double> cand_u(sil_segments * kc);
  for (std::size_t m = 0; m < sil_segments; ++m) {
    for (std::size_t j = 0; j < kc; ++j) {
      const double u = bounds[m] + (bounds[m + 1] - bounds[m]) * static_cast<double>(j) / static_cast<double>(kc - 1);
      cand_u[m * kc + j] = u;
      cand_pos[m * kc + j] = solution.point_at(u);
    }
  }
  auto segment_of = [&](double u) {
    const auto it = std::upper_bound(bounds.begin(), bounds.end(), u);
    const std::size_t m = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - bounds.begin() - 1, 0));
    return std::min(m, sil_segments - 1);
  };

  // Previous rank of each measured point and its previous arc position.
  const bool full = state.b_order.size() == n;
  std::vector<std::size_t> rank(n);
  std::vector<double> prior_u(n, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t b = 0; b < n; ++b) rank[b] = b;
  for (std::size_t k = 0; k < state.b_order.size(); ++k) {
    if (full) rank[state.b_order[k]] = k;
    prior_u[state.b_order[k]] = u_ctrl[k];
  }

  struct Projection {
    double u;
    std::size_t rank;
    std::size_t b;
    Point2 a;
  };
  std::vector<Projection> proj;
  proj.reserve(n);
  for (std::size_t b = 1; b + 1 < n; ++b) {
    std::size_t m;
    if (!std::isnan(prior_u[b])) {
      m = segment_of(prior_u[b]);
    } else {
      // Not yet projected: use the silhouette interval containing its index.
      const auto it = std::upper_bound(state.silhouette.begin(), state.silhouette.end(), b);
      const std::size_t interval = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - state.silhouette.begin() - 1, 0));
      const auto pos = std::find(state.b_order.begin(), state.b_order.end(), state.silhouette[interval]);
      const std::size_t k = pos != state.b_order.end() ? static_cast<std::size_t>(pos - state.b_order.begin()) : 0;
      m = segment_of(u_ctrl[k] + 1e-12);
    }
    const std::size_t lo = m == 0 ? 0 : m - 1;
    const std::size_t hi = std::min(m + 1, sil_segments - 1);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_c = lo * kc;
    for (std::size_t c = lo * kc; c < (hi + 1) * kc; ++c) {
      const Point2 d = cand_pos[c] - all_b.points[b];
      const double d2 = dot(d, d);
      if (d2 < best) {
        best = d2;
        best_c = c;
      }
    }
    proj.push_back({cand_u[best_c], rank[b], b, cand_pos[best_c]});
  }
  std::sort(proj.begin(), proj.end(), [](const Projection& x, const Projection& y) {
    return x.u != y.u ? x.u < y.u : x.rank < y.rank;
  });

  RefinementState next;
  next.iteration = state.iteration + 1;
  next.h = state.h;
  next.silhouette = state.silhouette;
  next.control.points.reserve(n);
  next.b_order.reserve(n);
  next.control.points.push_back(state.control.points.front());
  next.b_order.push_back(0);
  for (const Projection& p : proj) {
    next.control.points.push_back(p.a);
    next.b_order.push_back(p.b);
  }
  next.control.points.push_back(state.control.points.back());
  next.b_order.push_back(n - 1);

  // Gaps along the normal of the segment arriving at each control point.
  const SupportedPolygon merged = merge_coincident(
      next.control.points, std::vector<SupportSpec>(next.control.points.size()));
  const auto frames = build_frames(merged.polygon);
  next.gaps.assign(next.control.points.size(), 0.0);
  for (std::size_t k = 1; k + 1 < next.control.points.size(); ++k) {
    const std::size_t v = merged.merged_index[k];
    const SegmentFrame& f = frames[v == 0 ? 0 : v - 1];
    next.gaps[k] = signed_gap(next.control.points[k], f, all_b.points[next.b_order[k]]);
  }
  return next;
}

int schedule_solves(double h0, double h_final, double decay) {
  int solves = 1;
  for (double h = h0; h > h_final * (1.0 + 1e-12); h /= decay) ++solves;
  return solves;
}

SideFit refine_side(const ContourSamples& side, const SmoothingParams& params) {
  params.validate();
  SideFit fit;
  RefinementState state = init_silhouette(side, params.stride);
  double h = params.h;
  for (;;) {
    state.h = h;
    SplineSolution solution = solve_state(state, h);
    fit.h_history.push_back(h);
    if (h <= params.h_final * (1.0 + 1e-12)) {
      fit.solution = std::move(solution);
      break;
    }
    state = project_and_renumber(state, solution, side);
    h /= params.decay;
  }
  fit.state = std::move(state);
  fit.profile = curvature_profile(fit.solution);
  return fit;
}

PieceFit process_piece(const ContourSamples& outline, const SmoothingParams& params,
                       const CornerParams& corner_params) {
  const ContourSamples clean = remove_spurs(dedup_consecutive(outline));
  const auto corners = detect_corners(clean, corner_params);
  PieceFit fit;
  fit.contour = split_sides(clean, corners);
  for (std::size_t k = 0; k < 4; ++k) fit.sides[k] = refine_side(fit.contour.sides[k], params);
  return fit;
}

}  // namespace cbs
