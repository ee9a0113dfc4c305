#include "cbs/matching.hpp"

#include <algorithm>
#include <cmath>

#include "cbs/error.hpp"

namespace cbs {

std::string_view to_string(SideClass c) {
  switch (c) {
    case SideClass::Straight: return "straight";
    case SideClass::Convex: return "convex";
    case SideClass::Concave: return "concave";
  }
  return "straight";
}

std::optional<SideClass> side_class_from_string(std::string_view s) {
  if (s == "straight") return SideClass::Straight;
  if (s == "convex") return SideClass::Convex;
  if (s == "concave") return SideClass::Concave;
  return std::nullopt;
}

double side_energy(const CurvatureProfile& profile) {
  double e = 0.0;
  for (std::size_t i = 0; i + 1 < profile.size(); ++i) {
    const double ds = profile.s[i + 1] - profile.s[i];
    e += 0.5 * ds * (profile.kappa[i] * profile.kappa[i] + profile.kappa[i + 1] * profile.kappa[i + 1]);
  }
  return e;
}

SideClass curved_class(const CurvatureProfile& profile) {
  double best = 0.0;
  double run = 0.0;
  int run_sign = 0;
  for (std::size_t i = 0; i + 1 < profile.size(); ++i) {
    const double k = 0.5 * (profile.kappa[i] + profile.kappa[i + 1]);
    const int sign = k > 0 ? 1 : (k < 0 ? -1 : 0);
    const double turning = k * (profile.s[i + 1] - profile.s[i]);
    if (sign != run_sign) {
      run = 0.0;
      run_sign = sign;
    }
    run += turning;
    if (std::abs(run) > std::abs(best)) best = run;
  }
  return best < 0.0 ? SideClass::Convex : SideClass::Concave;
}

SideClass classify(const CurvatureProfile& profile, double energy, double straight_energy) {
  if (energy < straight_energy) return SideClass::Straight;
  return curved_class(profile);
}

void classify_sides(std::span<SideDescriptor> sides, double straight_energy) {
  for (SideDescriptor& d : sides) {
    d.energy = side_energy(d.profile);
    d.length = d.profile.length;
    d.cls = classify(d.profile, d.energy, straight_energy);
  }
}

SideDescriptor make_descriptor(std::string piece, int side, CurvatureProfile profile, double straight_energy) {
  SideDescriptor d;
  d.piece = std::move(piece);
  d.side = side;
  d.profile = std::move(profile);
  d.length = d.profile.length;
  d.energy = side_energy(d.profile);
  d.cls = classify(d.profile, d.energy, straight_energy);
  return d;
}

double length_ratio(double la, double lb) {
  if (!(la > 0.0) || !(lb > 0.0)) throw Error(ErrorCode::InvalidArgument, "lengths must be positive");
  return 100.0 * std::min(la, lb) / std::max(la, lb);
}

double shifted_energy(std::span<const double> ka, std::span<const double> kb_mate, double step, long offset) {
  const long n = static_cast<long>(std::min(ka.size(), kb_mate.size()));
  const long j0 = std::max(0L, -offset);
  const long j1 = std::min(n - 1, n - 1 - offset);
  double e = 0.0;
  for (long j = j0; j < j1; ++j) {
    const double d0 = ka[static_cast<std::size_t>(j + offset)] - kb_mate[static_cast<std::size_t>(j)];
    const double d1 = ka[static_cast<std::size_t>(j + 1 + offset)] - kb_mate[static_cast<std::size_t>(j + 1)];
    e += 0.5 * step * (d0 * d0 + d1 * d1);
  }
  return e;
}

namespace {

std::vector<double> on_grid(const CurvatureProfile& p, std::size_t n) {
  if (p.size() == n) return p.kappa;
  return resample_profile(p.s, p.kappa, n).kappa;
}

}  // namespace

MatchScore pair_energy(const SideDescriptor& a, const SideDescriptor& b, const MatchParams& params) {
  MatchScore score;
  score.a = a.id();
  score.b = b.id();
  score.length_ratio = length_ratio(a.length, b.length);
  if (score.length_ratio < 100.0 * params.length_gate) {
    score.rejected = true;
    return score;
  }
  // Stretching the shorter side's abscissa to the longer length puts both
  // profiles on the same uniform grid; curvature values are left unchanged.
  const std::size_t n = std::max(a.profile.size(), b.profile.size());
  const double length = std::max(a.length, b.length);
  const double step = length / static_cast<double>(n - 1);
  const std::vector<double> ka = on_grid(a.profile, n);
  const std::vector<double> kb = on_grid(b.profile, n);
  std::vector<double> mate(n);
  for (std::size_t j = 0; j < n; ++j) mate[j] = -kb[n - 1 - j];

  for (double shift : params.shifts) {
    const long offset = std::lround(shift / step);
    const double e = shifted_energy(ka, mate, step, offset);
    if (e < score.energy) {
      score.energy = e;
      score.shift = shift;
    }
  }
  return score;
}

}  // namespace cbs
