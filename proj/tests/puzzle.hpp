#pragma once

#include <vector>

#include "cbs/assembly.hpp"
#include "cbs/io.hpp"
#include "cbs/parallel.hpp"
#include "cbs/synth.hpp"

namespace puzzle {

struct Built {
  cbs::synth::SynthPuzzle synth;
  std::vector<cbs::io::DescriptorFile> files;   // sorted by id
  std::vector<cbs::PieceDescriptor> pieces;     // same order
};

// Generates a puzzle and runs every piece through the contour pipeline.
inline Built build(const cbs::synth::SynthSpec& spec, const cbs::SmoothingParams& params = {}) {
  Built b;
  b.synth = cbs::synth::generate(spec);
  std::vector<const cbs::synth::SynthPiece*> order;
  for (const auto& p : b.synth.pieces) order.push_back(&p);
  std::sort(order.begin(), order.end(), [](auto* x, auto* y) { return cbs::id_less(x->id, y->id); });
  b.files.resize(order.size());
  cbs::parallel_for(order.size(), [&](std::size_t i) {
    const auto fit = cbs::process_piece(cbs::trace_boundary(order[i]->mask), params);
    b.files[i] = cbs::io::describe(order[i]->id, fit);
  });
  for (const auto& f : b.files) b.pieces.push_back(f.piece);
  return b;
}

inline int layout_errors(const Built& b, const cbs::PuzzleState& state) {
  const auto truth = cbs::io::parse_layout(cbs::synth::truth_json(b.synth));
  const auto got = cbs::io::parse_layout(cbs::io::layout_json(state, b.pieces));
  return cbs::io::layout_errors(truth, got);
}

}  // namespace puzzle
