#pragma once

#include <array>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cbs/error.hpp"
#include "cbs/matching.hpp"

namespace cbs {

enum class PieceKind { Interior, Border, Corner, StripEnd, Single };

std::string_view to_string(PieceKind k);

struct PieceDescriptor {
  std::string id;
  std::array<SideDescriptor, 4> sides;  // clockwise

  int straight_count() const;
  PieceKind kind() const;
};

// Grid directions, clockwise. A piece placed with rotation r shows side
// (d + r) % 4 towards direction d.
enum Direction : int { kTop = 0, kRight = 1, kBottom = 2, kLeft = 3 };

inline int side_facing(int direction, int rotation) { return (direction + rotation) % 4; }

struct Placement {
  std::size_t piece = 0;  // index into the piece list
  int rotation = 0;
};

struct Constraint {
  enum class Kind { Free, Straight, Curved, Match } kind = Kind::Free;
  const SideDescriptor* neighbor = nullptr;  // for Match

  static Constraint free() { return {}; }
  static Constraint straight() { return {Kind::Straight, nullptr}; }
  static Constraint curved() { return {Kind::Curved, nullptr}; }
  static Constraint match(const SideDescriptor& s) { return {Kind::Match, &s}; }
};

using CellConstraints = std::array<Constraint, 4>;

struct StepResult {
  Placement placement;
  double energy = 0.0;  // sum of pair energies over matched directions
  std::vector<MatchScore> matches;
  double runner_up = std::numeric_limits<double>::infinity();
  std::optional<Placement> runner_up_placement;
};

struct AssemblyParams {
  MatchParams match;
};

/// Best unused (piece, rotation) satisfying the constraints; throws
/// Error(NoCandidate) when nothing qualifies.
StepResult best_placement(std::span<const PieceDescriptor> pieces, std::span<const bool> used,
                          const CellConstraints& constraints, const AssemblyParams& params = {});

/// Corner piece with the smallest sum of straight-side energies, rotated so
/// its straight sides face left and up. Throws Error(NoCornerFound).
Placement find_seed_corner(std::span<const PieceDescriptor> pieces);

/// First-row step: straight side up, left side mates with `open_side`.
StepResult next_border_piece(std::span<const PieceDescriptor> pieces, std::span<const bool> used,
                             const SideDescriptor& open_side, const AssemblyParams& params = {});

/// Interior step constrained by the left and top neighbours.
StepResult next_interior_piece(std::span<const PieceDescriptor> pieces, std::span<const bool> used,
                               const SideDescriptor& left_side, const SideDescriptor& top_side,
                               const AssemblyParams& params = {});

struct StepRecord {
  int row = 0;
  int col = 0;
  StepResult result;
};

struct PuzzleState {
  int rows = 0;
  int cols = 0;
  std::vector<Placement> grid;  // row-major
  std::vector<StepRecord> steps;

  const Placement& at(int r, int c) const { return grid[static_cast<std::size_t>(r * cols + c)]; }
};

class AssemblyStuck : public Error {
 public:
  AssemblyStuck(int row, int col, std::vector<std::string> diagnostics, const std::string& what)
      : Error(ErrorCode::AssemblyStuck, what), row_(row), col_(col), diagnostics_(std::move(diagnostics)) {}

  int row() const { return row_; }
  int col() const { return col_; }
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  int row_;
  int col_;
  std::vector<std::string> diagnostics_;
};

/// Greedy reconstruction: seed corner, first row until the next corner,
/// then each further row left to right. Pieces are processed in id order.
PuzzleState assemble(std::span<const PieceDescriptor> pieces, const AssemblyParams& params = {});

/// Orders ids numerically when both are integers, lexicographically otherwise.
bool id_less(const std::string& a, const std::string& b);

}  // namespace cbs
