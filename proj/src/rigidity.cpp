#include "cbs/rigidity.hpp"

#include <cmath>
#include <limits>

#include "cbs/error.hpp"

namespace cbs {

void SmoothingParams::validate() const {
  if (!(h > 0.0) || stride < 2 || !(decay > 1.0) || !(h_final > 0.0) || h_final > h) {
    throw Error(ErrorCode::InvalidArgument, "smoothing params need h > 0, K >= 2, decay > 1, 0 < h_final <= h");
  }
}

std::vector<double> support_lengths(std::span<const double> gaps) {
  std::vector<double> out(gaps.size() + 1, 0.0);
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    out[i] += 0.5 * gaps[i];
    out[i + 1] += 0.5 * gaps[i];
  }
  return out;
}

double compliance(double length, double h) {
  if (!(length > 0.0)) return std::numeric_limits<double>::infinity();
  return (h * h * h * h) / length;
}

SupportedPolygon merge_coincident(std::span<const Point2> points, std::span<const SupportSpec> supports,
                                  double merge_tol) {
  if (points.size() != supports.size()) throw Error(ErrorCode::InvalidArgument, "one support per point expected");
  SupportedPolygon out;
  out.merged_index.resize(points.size());
  // Accumulate rigidity D and D*gap per merged vertex; interpolating
  // supports (C = 0) dominate any finite spring at the same vertex.
  struct Acc {
    double rigidity = 0.0;
    double weighted_gap = 0.0;
    int rigid_count = 0;
    double rigid_gap = 0.0;
  };
  std::vector<Acc> acc;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (out.polygon.points.empty() || distance(out.polygon.points.back(), points[i]) > merge_tol) {
      out.polygon.points.push_back(points[i]);
      acc.emplace_back();
    }
    out.merged_index[i] = out.polygon.points.size() - 1;
    Acc& a = acc.back();
    const SupportSpec& s = supports[i];
    if (s.compliance == 0.0) {
      ++a.rigid_count;
      a.rigid_gap += s.gap;
    } else if (std::isfinite(s.compliance)) {
      a.rigidity += 1.0 / s.compliance;
      a.weighted_gap += s.gap / s.compliance;
    }
  }
  out.supports.reserve(acc.size());
  for (const Acc& a : acc) {
    if (a.rigid_count > 0) {
      out.supports.push_back({a.rigid_gap / a.rigid_count, 0.0});
    } else if (a.rigidity > 0.0) {
      out.supports.push_back({a.weighted_gap / a.rigidity, 1.0 / a.rigidity});
    } else {
      out.supports.push_back({0.0, std::numeric_limits<double>::infinity()});
    }
  }
  return out;
}

SupportedPolygon adaptive_supports(std::span<const Point2> points, std::span<const double> gaps, double h,
                                   double merge_tol) {
  if (points.size() != gaps.size()) throw Error(ErrorCode::InvalidArgument, "one gap per point expected");
  std::vector<double> arc(points.size() > 0 ? points.size() - 1 : 0);
  for (std::size_t i = 0; i + 1 < points.size(); ++i) arc[i] = distance(points[i], points[i + 1]);
  const std::vector<double> lengths = support_lengths(arc);
  std::vector<SupportSpec> supports(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const bool end = i == 0 || i + 1 == points.size();
    supports[i].gap = end ? 0.0 : gaps[i];
    supports[i].compliance = end ? std::numeric_limits<double>::infinity() : compliance(lengths[i], h);
  }
  return merge_coincident(points, supports, merge_tol);
}

}  // namespace cbs
