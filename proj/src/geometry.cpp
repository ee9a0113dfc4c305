#include "cbs/geometry.hpp"

#include <numbers>
#include <string>

#include "cbs/error.hpp"

namespace cbs {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroLengthSegment: return "ZeroLengthSegment";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::EmptyMask: return "EmptyMask";
    case ErrorCode::MultipleComponents: return "MultipleComponents";
    case ErrorCode::CornersNotFound: return "CornersNotFound";
    case ErrorCode::StrideTooCoarse: return "StrideTooCoarse";
    case ErrorCode::NoCornerFound: return "NoCornerFound";
    case ErrorCode::NoCandidate: return "NoCandidate";
    case ErrorCode::AssemblyStuck: return "AssemblyStuck";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Point2 rotate(Point2 p, double angle, Point2 center) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  const Point2 d = p - center;
  return {center.x + c * d.x - s * d.y, center.y + s * d.x + c * d.y};
}

ContourSamples dedup_consecutive(ContourSamples samples) {
  auto& pts = samples.points;
  std::vector<Point2> out;
  out.reserve(pts.size());
  for (const Point2& p : pts) {
    if (out.empty() || !(out.back() == p)) out.push_back(p);
  }
  if (samples.closed && out.size() > 1 && out.front() == out.back()) out.pop_back();
  pts = std::move(out);
  return samples;
}

ContourSamples remove_spurs(ContourSamples samples) {
  std::vector<Point2> out;
  out.reserve(samples.points.size());
  for (const Point2& p : samples.points) {
    if (!out.empty() && out.back() == p) continue;
    if (out.size() >= 2 && out[out.size() - 2] == p) {
      out.pop_back();
      continue;
    }
    out.push_back(p);
  }
  if (samples.closed) {
    // Spurs straddling the start of the ring.
    for (bool changed = true; changed && out.size() >= 3;) {
      changed = false;
      const std::size_t n = out.size();
      if (out.back() == out.front()) {
        out.pop_back();
        changed = true;
      } else if (out[n - 2] == out.front()) {
        out.pop_back();
        changed = true;
      } else if (out.back() == out[1]) {
        out.erase(out.begin());
        changed = true;
      }
    }
  }
  samples.points = std::move(out);
  return samples;
}

double signed_area(std::span<const Point2> ring) {
  double twice = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    twice += cross(ring[i], ring[(i + 1) % ring.size()]);
  }
  return 0.5 * twice;
}

std::vector<SegmentFrame> build_frames(const ControlPolygon& polygon) {
  const auto& pts = polygon.points;
  if (pts.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "polygon needs at least one segment");
  }
  std::vector<SegmentFrame> frames(pts.size() - 1);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Point2 d = pts[i + 1] - pts[i];
    const double len = norm(d);
    if (!(len > 0.0)) {
      throw Error(ErrorCode::ZeroLengthSegment,
                  "control points " + std::to_string(i) + " and " + std::to_string(i + 1) + " coincide");
    }
    SegmentFrame& f = frames[i];
    f.length = len;
    f.tangent = {d.x / len, d.y / len};
    f.normal = {f.tangent.y, -f.tangent.x};
  }
  const auto psi = misalignment_angles(frames);
  for (std::size_t i = 0; i < psi.size(); ++i) frames[i].misalignment = psi[i];
  return frames;
}

std::vector<double> misalignment_angles(std::span<const SegmentFrame> frames) {
  std::vector<double> psi;
  if (frames.size() < 2) return psi;
  psi.reserve(frames.size() - 1);
  for (std::size_t i = 0; i + 1 < frames.size(); ++i) {
    const double c = dot(frames[i].tangent, frames[i + 1].tangent);
    const double s = dot(frames[i].normal, frames[i + 1].tangent);
    double a = std::atan2(s, c);
    if (a <= -std::numbers::pi) a = std::numbers::pi;
    psi.push_back(a);
  }
  return psi;
}

std::vector<double> cumulative_length(std::span<const Point2> points) {
  std::vector<double> s(points.size(), 0.0);
  for (std::size_t i = 1; i < points.size(); ++i) s[i] = s[i - 1] + distance(points[i - 1], points[i]);
  return s;
}

}  // namespace cbs
