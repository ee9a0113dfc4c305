#include "cbs/beam_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cbs/banded.hpp"
#include "cbs/error.hpp"

namespace cbs {

StateVector transfer(const StateVector& z, double t) {
  const double t2 = t * t / 2.0;
  const double t3 = t * t * t / 6.0;
  return {z.W + t * z.theta + t2 * z.M + t3 * z.Q,
          z.theta + t * z.M + t2 * z.Q,
          z.M + t * z.Q,
          z.Q};
}

SplineSolution::SplineSolution(std::vector<SegmentSolution> segments, double residual)
    : segments_(std::move(segments)), residual_(residual) {
  offsets_.assign(segments_.size() + 1, 0.0);
  for (std::size_t i = 0; i < segments_.size(); ++i) offsets_[i + 1] = offsets_[i] + segments_[i].frame.length;
}

const SegmentSolution& SplineSolution::segment(std::size_t i) const {
  if (i >= segments_.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "segment " + std::to_string(i) + " of " + std::to_string(segments_.size()));
  }
  return segments_[i];
}

Point2 SplineSolution::evaluate(std::size_t i, double t) const {
  const SegmentSolution& seg = segment(i);
  const StateVector z = transfer(seg.start, t);
  const SegmentFrame& f = seg.frame;
  const double c = std::cos(z.theta);
  const double s = std::sin(z.theta);
  // deformed normal: n cos(theta) - t sin(theta)
  const Point2 rotated_normal = c * f.normal - s * f.tangent;
  return seg.origin + t * f.tangent + z.W * rotated_normal;
}

void SplineSolution::derivatives(std::size_t i, double t, Point2& d1, Point2& d2) const {
  const SegmentSolution& seg = segment(i);
  const StateVector z = transfer(seg.start, t);
  const double c = std::cos(z.theta);
  const double s = std::sin(z.theta);
  const double W = z.W, th = z.theta, M = z.M, Q = z.Q;
  // Local components T = t - W sin(theta), N = W cos(theta) with W' = theta,
  // theta' = M, M' = Q.
  const double dT = 1.0 - th * s - W * M * c;
  const double dN = th * c - W * M * s;
  const double ddT = -M * s - 2.0 * th * M * c - W * Q * c + W * M * M * s;
  const double ddN = M * c - 2.0 * th * M * s - W * Q * s - W * M * M * c;
  const SegmentFrame& f = seg.frame;
  d1 = dT * f.tangent + dN * f.normal;
  d2 = ddT * f.tangent + ddN * f.normal;
}

double SplineSolution::curvature(std::size_t i, double t) const {
  Point2 d1, d2;
  derivatives(i, t, d1, d2);
  const double speed2 = dot(d1, d1);
  return cross(d1, d2) / (speed2 * std::sqrt(speed2));
}

Point2 SplineSolution::point_at(double u) const {
  if (segments_.empty()) throw Error(ErrorCode::IndexOutOfRange, "empty spline");
  u = std::clamp(u, 0.0, chord_length());
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), u);
  std::size_t i = static_cast<std::size_t>(std::distance(offsets_.begin(), it));
  i = i == 0 ? 0 : i - 1;
  if (i >= segments_.size()) i = segments_.size() - 1;
  const double t = std::min(u - offsets_[i], segments_[i].frame.length);
  return evaluate(i, t);
}

std::vector<Point2> SplineSolution::sample(std::size_t per_segment) const {
  std::vector<Point2> out;
  if (segments_.empty()) return out;
  per_segment = std::max<std::size_t>(per_segment, 1);
  out.reserve(segments_.size() * per_segment + 1);
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const double l = segments_[i].frame.length;
    for (std::size_t j = 0; j < per_segment; ++j) out.push_back(evaluate(i, l * static_cast<double>(j) / per_segment));
  }
  out.push_back(evaluate(segments_.size() - 1, segments_.back().frame.length));
  return out;
}

namespace {

// Unknown layout: segment i owns columns [8i, 8i+8): Z_{i,0} then Z_{i,1}.
constexpr std::size_t kBlock = 8;
constexpr std::size_t kLowerBand = 5;
constexpr std::size_t kUpperBand = 2;

std::size_t start_col(std::size_t seg, std::size_t comp) { return kBlock * seg + comp; }
std::size_t end_col(std::size_t seg, std::size_t comp) { return kBlock * seg + 4 + comp; }

}  // namespace

SplineSolution assemble_and_solve(const ControlPolygon& polygon, std::span<const SupportSpec> supports,
                                  BoundaryCondition bc) {
  (void)bc;  // PinnedFree is the only condition
  const std::vector<SegmentFrame> frames = build_frames(polygon);
  const std::size_t m = frames.size();
  if (supports.size() != polygon.points.size()) {
    throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(polygon.points.size()) +
                                                " supports, got " + std::to_string(supports.size()));
  }

  const std::size_t n = kBlock * m;
  BandMatrix a(n, kLowerBand, kUpperBand);
  std::vector<double> rhs(n, 0.0);
  std::size_t row = 0;

  a.at(row++, start_col(0, 0)) = 1.0;  // W = 0
  a.at(row++, start_col(0, 2)) = 1.0;  // M = 0

  for (std::size_t i = 0; i < m; ++i) {
    const double l = frames[i].length;
    const double p[4] = {1.0, l, l * l / 2.0, l * l * l / 6.0};
    for (std::size_t k = 0; k < 4; ++k) {
      a.at(row, end_col(i, k)) = 1.0;
      for (std::size_t j = k; j < 4; ++j) a.at(row, start_col(i, j)) = -p[j - k];
      ++row;
    }
    if (i + 1 == m) break;

    const double psi = *frames[i].misalignment;
    const SupportSpec& sup = supports[i + 1];
    if (!(sup.compliance >= 0.0) || !std::isfinite(sup.gap)) {
      throw Error(ErrorCode::InvalidArgument, "support " + std::to_string(i + 1) + " has invalid compliance or gap");
    }

    a.at(row, start_col(i + 1, 0)) = 1.0;
    a.at(row, end_col(i, 0)) = -1.0;
    ++row;
    a.at(row, start_col(i + 1, 1)) = 1.0;
    a.at(row, end_col(i, 1)) = -1.0;
    rhs[row] = -psi;
    ++row;
    a.at(row, start_col(i + 1, 2)) = 1.0;
    a.at(row, end_col(i, 2)) = -1.0;
    ++row;
    // W - gap + C (Q_next - Q_prev) = 0, scaled by 1/(1 + C) so that both
    // C = 0 (interpolation) and C = inf (no tie) are representable.
    const double w = std::isinf(sup.compliance) ? 0.0 : 1.0 / (1.0 + sup.compliance);
    const double v = std::isinf(sup.compliance) ? 1.0 : sup.compliance * w;
    a.at(row, end_col(i, 0)) = w;
    a.at(row, start_col(i + 1, 3)) = v;
    a.at(row, end_col(i, 3)) = -v;
    rhs[row] = w * sup.gap;
    ++row;
  }

  a.at(row++, end_col(m - 1, 0)) = 1.0;
  a.at(row++, end_col(m - 1, 2)) = 1.0;

  std::vector<double> x = solve_banded(a, rhs);
  // One step of iterative refinement.
  std::vector<double> r = a.multiply(x);
  for (std::size_t k = 0; k < n; ++k) r[k] = rhs[k] - r[k];
  const std::vector<double> dx = solve_banded(a, r);
  for (std::size_t k = 0; k < n; ++k) x[k] += dx[k];
  r = a.multiply(x);
  double residual = 0.0;
  for (std::size_t k = 0; k < n; ++k) residual = std::max(residual, std::abs(rhs[k] - r[k]));

  std::vector<SegmentSolution> segs(m);
  for (std::size_t i = 0; i < m; ++i) {
    segs[i].start = {x[start_col(i, 0)], x[start_col(i, 1)], x[start_col(i, 2)], x[start_col(i, 3)]};
    segs[i].end = {x[end_col(i, 0)], x[end_col(i, 1)], x[end_col(i, 2)], x[end_col(i, 3)]};
    segs[i].frame = frames[i];
    segs[i].origin = polygon.points[i];
  }
  return SplineSolution(std::move(segs), residual);
}

CurvatureProfile resample_profile(std::span<const double> s, std::span<const double> kappa, std::size_t samples) {
  if (s.size() != kappa.size() || s.empty()) throw Error(ErrorCode::InvalidArgument, "profile arrays mismatch");
  samples = std::max<std::size_t>(samples, 2);
  CurvatureProfile out;
  out.length = s.back() - s.front();
  out.s.resize(samples);
  out.kappa.resize(samples);
  std::size_t j = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double target = out.length * static_cast<double>(k) / static_cast<double>(samples - 1);
    out.s[k] = target;
    const double abs_target = s.front() + target;
    while (j + 2 < s.size() && s[j + 1] < abs_target) ++j;
    const double s0 = s[j];
    const double s1 = s[std::min(j + 1, s.size() - 1)];
    const double k0 = kappa[j];
    const double k1 = kappa[std::min(j + 1, s.size() - 1)];
    const double w = s1 > s0 ? std::clamp((abs_target - s0) / (s1 - s0), 0.0, 1.0) : 0.0;
    out.kappa[k] = k0 + w * (k1 - k0);
  }
  out.s.back() = out.length;
  return out;
}

CurvatureProfile curvature_profile(const SplineSolution& solution, std::size_t samples_per_segment,
                                   std::size_t profile_samples) {
  samples_per_segment = std::max<std::size_t>(samples_per_segment, 1);
  std::vector<double> s_all;
  std::vector<double> k_all;
  s_all.reserve(solution.segment_count() * samples_per_segment + 1);
  k_all.reserve(s_all.capacity());

  auto speed = [&](std::size_t i, double t) {
    Point2 d1, d2;
    solution.derivatives(i, t, d1, d2);
    return norm(d1);
  };

  double s = 0.0;
  for (std::size_t i = 0; i < solution.segment_count(); ++i) {
    const double l = solution.segment(i).frame.length;
    const double dt = l / static_cast<double>(samples_per_segment);
    if (i == 0) {
      s_all.push_back(0.0);
      k_all.push_back(solution.curvature(0, 0.0));
    }
    for (std::size_t j = 0; j < samples_per_segment; ++j) {
      const double t0 = dt * static_cast<double>(j);
      const double t1 = j + 1 == samples_per_segment ? l : t0 + dt;
      // Simpson on [t0, t1]
      s += (t1 - t0) / 6.0 * (speed(i, t0) + 4.0 * speed(i, 0.5 * (t0 + t1)) + speed(i, t1));
      s_all.push_back(s);
      k_all.push_back(solution.curvature(i, t1));
    }
  }
  return resample_profile(s_all, k_all, profile_samples);
}

}  // namespace cbs
