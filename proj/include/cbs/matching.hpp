#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cbs/beam_solver.hpp"

namespace cbs {

enum class SideClass { Straight, Convex, Concave };

std::string_view to_string(SideClass c);
std::optional<SideClass> side_class_from_string(std::string_view s);

struct SideDescriptor {
  std::string piece;
  int side = 0;  // 0..3, clockwise
  CurvatureProfile profile;
  double length = 0.0;
  double energy = 0.0;
  SideClass cls = SideClass::Straight;

  /// "piece-N" with N counted from 1.
  std::string id() const { return piece + "-" + std::to_string(side + 1); }
};

struct MatchParams {
  std::vector<double> shifts{-4.0, -2.0, 0.0, 2.0, 4.0};
  double length_gate = 0.97;
};

struct MatchScore {
  std::string a;
  std::string b;
  double energy = std::numeric_limits<double>::infinity();
  double shift = 0.0;
  double length_ratio = 0.0;  // percent
  bool rejected = false;      // failed the length gate
};

inline constexpr double kDefaultStraightEnergy = 0.1;

/// Trapezoid rule for the integral of kappa^2 over s.
double side_energy(const CurvatureProfile& profile);

/// Convex when the turning of the dominant same-sign curvature run is
/// clockwise (the tab bulges outward on a clockwise outline).
SideClass curved_class(const CurvatureProfile& profile);

SideClass classify(const CurvatureProfile& profile, double energy, double straight_energy = kDefaultStraightEnergy);

/// Fills energy and class for every descriptor.
void classify_sides(std::span<SideDescriptor> sides, double straight_energy = kDefaultStraightEnergy);

SideDescriptor make_descriptor(std::string piece, int side, CurvatureProfile profile,
                               double straight_energy = kDefaultStraightEnergy);

/// 100 * min / max.
double length_ratio(double la, double lb);

/// Curvature-difference energy of `a` against the mate transform of `b`,
/// minimized over the shift candidates. Rejected (infinite energy) when the
/// length ratio is below the gate.
MatchScore pair_energy(const SideDescriptor& a, const SideDescriptor& b, const MatchParams& params = {});

/// Energy for one shift on profiles already stretched to a common grid.
double shifted_energy(std::span<const double> ka, std::span<const double> kb_mate, double step, long offset);

}  // namespace cbs
