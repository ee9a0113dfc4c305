#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "cbs/assembly.hpp"
#include "cbs/contour.hpp"
#include "cbs/matching.hpp"

namespace cbs::io {

namespace fs = std::filesystem;

/// Portable bitmap, plain (P1) or raw (P4). Set bits are foreground.
RasterMask read_pbm(const fs::path& path);
RasterMask parse_pbm(const std::string& bytes, const std::string& name = "<memory>");
void write_pbm(const fs::path& path, const RasterMask& mask);

/// One "x y" pair per line; blank lines and '#' comments are skipped.
ContourSamples read_points(const fs::path& path);
ContourSamples parse_points(const std::string& text, const std::string& name = "<memory>");

struct PieceFile {
  std::string id;
  std::vector<Point2> points;
  bool closed = true;
};

PieceFile read_piece_file(const fs::path& path);
void write_piece_file(const fs::path& path, const PieceFile& piece);

/// Loads a mask (.pbm), point list (.txt / .pts) or piece file (.json) and
/// returns the clockwise outline. The id is the file stem unless the piece
/// file names one.
struct LoadedOutline {
  std::string id;
  ContourSamples outline;
};
LoadedOutline load_outline(const fs::path& path);

/// Piece descriptor: side profiles plus enough geometry to draw the piece.
struct DescriptorFile {
  PieceDescriptor piece;
  std::array<Point2, 4> corners{};
  std::array<std::vector<Point2>, 4> curves;  // sampled final spline per side
};

/// Builds the descriptor of a fitted piece; sides are classified with
/// `straight_energy`.
DescriptorFile describe(const std::string& id, const PieceFit& fit, double straight_energy = kDefaultStraightEnergy);

struct Layout {
  int rows = 0;
  int cols = 0;
  std::vector<std::pair<std::string, int>> cells;  // (piece id, rotation), row-major
};

Layout parse_layout(const std::string& text, const std::string& name = "<memory>");

/// Mismatched cells after the best global quarter-turn of `got` onto
/// `truth`; every cell counts when no turn makes the shapes agree.
int layout_errors(const Layout& truth, const Layout& got);

std::string descriptor_json(const DescriptorFile& d);
DescriptorFile parse_descriptor(const std::string& text, const std::string& name = "<memory>");
DescriptorFile read_descriptor(const fs::path& path);
void write_descriptor(const fs::path& path, const DescriptorFile& d);

std::string profile_csv(const CurvatureProfile& profile);

/// All pairs of curved sides, rejected pairs included.
std::string match_csv(std::span<const PieceDescriptor> pieces, const MatchParams& params);

std::string layout_json(const PuzzleState& state, std::span<const PieceDescriptor> pieces);

/// Overlay of measured points, the final control polygon and the spline of
/// every side.
std::string piece_svg(const PieceFit& fit);

/// Every piece outline moved into its grid cell.
std::string assembled_svg(const PuzzleState& state, std::span<const DescriptorFile> pieces);

std::string read_text(const fs::path& path);
void write_text(const fs::path& path, const std::string& text);

}  // namespace cbs::io
