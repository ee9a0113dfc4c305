#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cbs/contour.hpp"

namespace cbs::synth {

struct SynthSpec {
  int rows = 2;
  int cols = 2;
  double piece_size = 320.0;    // px
  double tab_amplitude = 96.0;  // knob height, px
  double noise_sigma = 0.0;     // px
  std::uint64_t seed = 1;

  void validate() const;
};

/// Counter-based generator: every draw is a pure function of
/// (seed, stream, counter), so call order never changes the output.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  std::uint64_t bits(std::uint64_t counter) const;
  double uniform(std::uint64_t counter) const;                 // [0, 1)
  double uniform(std::uint64_t counter, double lo, double hi) const;
  double normal(std::uint64_t counter) const;                  // uses counters 2c and 2c+1

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

/// One shared cut: a knob tab drawn as three cubic Bezier pieces in unit
/// edge coordinates (u along the edge, v across it).
struct EdgeShape {
  bool flat = true;
  double sign = 1.0;    // +1 puts the knob on the +v side
  double size = 0.1;    // knob head height is about 3 * size
  double shift = 0.0;   // knob centre offset along the edge
  double lift = 0.0;    // knob offset across the edge
  double neck = 0.0;    // neck asymmetry
  double width = 1.0;   // head width relative to height
  double tilt = 0.0;    // head tilt, in units of size
  double depth = 1.0;   // neck control depth, in units of size

  /// Points from (0, 0) up to but excluding (length, 0), about 1 px apart.
  std::vector<Point2> curve(double length) const;
};

struct SynthPiece {
  std::string id;
  int row = 0;
  int col = 0;
  int rotation = 0;  // clockwise quarter turns applied to the scan
  RasterMask mask;
};

struct SynthPuzzle {
  SynthSpec spec;
  std::vector<SynthPiece> pieces;  // in grid order
};

SynthPuzzle generate(const SynthSpec& spec);

/// Writes <id>.pbm per piece plus truth.json with the ground-truth layout.
void write_puzzle(const SynthPuzzle& puzzle, const std::filesystem::path& dir);

std::string truth_json(const SynthPuzzle& puzzle);

}  // namespace cbs::synth
