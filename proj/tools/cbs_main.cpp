// cbs: corotational beam spline pipeline for apictorial jigsaw pieces.
//
//   cbs synth    --rows R --cols C --seed S --out DIR
//   cbs pipeline INPUT... --out DIR
//   cbs match    DESCRIPTOR_DIR --out DIR
//
// Exit codes: 0 ok, 2 bad input or arguments, 3 pipeline failure,
// 4 assembly stuck.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cbs/assembly.hpp"
#include "cbs/io.hpp"
#include "cbs/parallel.hpp"
#include "cbs/synth.hpp"

namespace fs = std::filesystem;
using namespace cbs;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitPipeline = 3;
constexpr int kExitStuck = 4;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::ParseError:
    case ErrorCode::InvalidArgument:
      return kExitParse;
    case ErrorCode::AssemblyStuck:
      return kExitStuck;
    default:
      return kExitPipeline;
  }
}

std::vector<fs::path> expand_inputs(const std::vector<std::string>& args) {
  std::vector<fs::path> out;
  for (const std::string& a : args) {
    const fs::path p(a);
    if (!fs::is_directory(p)) {
      out.push_back(p);
      continue;
    }
    std::vector<fs::path> found;
    for (const auto& entry : fs::directory_iterator(p)) {
      const std::string ext = entry.path().extension().string();
      if (entry.is_regular_file() && (ext == ".pbm" || ext == ".txt" || ext == ".pts")) found.push_back(entry.path());
    }
    std::sort(found.begin(), found.end(),
              [](const fs::path& x, const fs::path& y) { return id_less(x.stem().string(), y.stem().string()); });
    out.insert(out.end(), found.begin(), found.end());
  }
  return out;
}

std::vector<double> parse_shifts(const std::string& text) {
  std::vector<double> shifts;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      shifts.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad shift value '" + tok + "'");
    }
  }
  if (shifts.empty()) throw Error(ErrorCode::InvalidArgument, "--shifts needs at least one value");
  return shifts;
}

struct PipelineArgs {
  std::vector<std::string> inputs;
  std::string out = "descriptors";
  SmoothingParams smoothing;
  double e_straight = kDefaultStraightEnergy;
  bool svg = true;
};

int run_pipeline(const PipelineArgs& args) {
  args.smoothing.validate();
  const std::vector<fs::path> inputs = expand_inputs(args.inputs);
  if (inputs.empty()) throw Error(ErrorCode::InvalidArgument, "no input files");
  fs::create_directories(args.out);

  std::vector<std::optional<Error>> failures(inputs.size());
  parallel_for(inputs.size(), [&](std::size_t i) {
    try {
      const io::LoadedOutline loaded = io::load_outline(inputs[i]);
      const PieceFit fit = process_piece(loaded.outline, args.smoothing);
      const io::DescriptorFile d = io::describe(loaded.id, fit, args.e_straight);
      const fs::path base = fs::path(args.out) / loaded.id;
      io::write_descriptor(base.string() + ".json", d);
      for (std::size_t k = 0; k < 4; ++k) {
        io::write_text(base.string() + "-" + std::to_string(k + 1) + ".csv", io::profile_csv(d.piece.sides[k].profile));
      }
      if (args.svg) io::write_text(base.string() + ".svg", io::piece_svg(fit));
    } catch (const Error& e) {
      failures[i] = e;
    }
  });

  int code = 0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (!failures[i]) continue;
    std::cerr << inputs[i].string() << ": " << failures[i]->what() << "\n";
    code = std::max(code, exit_code_for(*failures[i]));
  }
  return code;
}

struct MatchArgs {
  std::string input;
  std::string out = "assembly";
  std::string shifts = "-4,-2,0,2,4";
  double length_gate = 0.97;
};

int run_match(const MatchArgs& args) {
  MatchParams mp;
  mp.shifts = parse_shifts(args.shifts);
  mp.length_gate = args.length_gate;
  if (!(mp.length_gate > 0.0 && mp.length_gate <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "--length-gate must lie in (0, 1]");
  }

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(args.input)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::vector<io::DescriptorFile> descriptors(files.size());
  parallel_for(files.size(), [&](std::size_t i) { descriptors[i] = io::read_descriptor(files[i]); });
  if (descriptors.empty()) throw Error(ErrorCode::InvalidArgument, args.input + ": no descriptor files");
  std::sort(descriptors.begin(), descriptors.end(),
            [](const io::DescriptorFile& a, const io::DescriptorFile& b) { return id_less(a.piece.id, b.piece.id); });

  std::vector<PieceDescriptor> pieces;
  pieces.reserve(descriptors.size());
  for (const auto& d : descriptors) pieces.push_back(d.piece);

  fs::create_directories(args.out);
  const fs::path out(args.out);
  io::write_text(out / "matches.csv", io::match_csv(pieces, mp));

  AssemblyParams ap;
  ap.match = mp;
  PuzzleState state;
  try {
    state = assemble(pieces, ap);
  } catch (const AssemblyStuck& e) {
    std::cerr << "assembly stuck at row " << e.row() << ", col " << e.col() << ": " << e.what() << "\n";
    for (const std::string& d : e.diagnostics()) std::cerr << "  " << d << "\n";
    return kExitStuck;
  }
  io::write_text(out / "layout.json", io::layout_json(state, pieces));
  io::write_text(out / "assembled.svg", io::assembled_svg(state, descriptors));
  for (const StepRecord& s : state.steps) {
    std::cout << "(" << s.row << "," << s.col << ") " << pieces[s.result.placement.piece].id << " r"
              << s.result.placement.rotation << " E=" << s.result.energy << " next=" << s.result.runner_up;
    if (const auto& r = s.result.runner_up_placement) std::cout << " (" << pieces[r->piece].id << " r" << r->rotation << ")";
    std::cout << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Corotational beam spline contour pipeline and jigsaw assembler"};
  app.require_subcommand(1);

  synth::SynthSpec spec;
  std::string synth_out = "pieces";
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic puzzle (masks + truth.json)");
  synth_cmd->add_option("--rows", spec.rows, "Grid rows")->capture_default_str();
  synth_cmd->add_option("--cols", spec.cols, "Grid columns")->capture_default_str();
  synth_cmd->add_option("--size", spec.piece_size, "Piece side length, px")->capture_default_str();
  synth_cmd->add_option("--amplitude", spec.tab_amplitude, "Tab amplitude, px")->capture_default_str();
  synth_cmd->add_option("--noise", spec.noise_sigma, "Boundary noise sigma, px")->capture_default_str();
  synth_cmd->add_option("--seed", spec.seed, "Random seed")->capture_default_str();
  synth_cmd->add_option("--out", synth_out, "Output directory")->capture_default_str();

  PipelineArgs pipe;
  auto* pipe_cmd = app.add_subcommand("pipeline", "Fit sides and write descriptors, curvature CSVs and SVGs");
  pipe_cmd->add_option("inputs", pipe.inputs, "Mask (.pbm), point list (.txt) or piece (.json) files, or directories")
      ->required();
  pipe_cmd->add_option("--out", pipe.out, "Output directory")->capture_default_str();
  pipe_cmd->add_option("--h0", pipe.smoothing.h, "Initial smoothing length")->capture_default_str();
  pipe_cmd->add_option("--h-final", pipe.smoothing.h_final, "Final smoothing length")->capture_default_str();
  pipe_cmd->add_option("--stride", pipe.smoothing.stride, "Silhouette stride K")->capture_default_str();
  pipe_cmd->add_option("--decay", pipe.smoothing.decay, "Smoothing length decay per iteration")->capture_default_str();
  pipe_cmd->add_option("--e-straight", pipe.e_straight, "Straight-side energy threshold")->capture_default_str();
  pipe_cmd->add_flag("!--no-svg", pipe.svg, "Skip SVG output");

  MatchArgs match;
  auto* match_cmd = app.add_subcommand("match", "Score all side pairs and assemble the puzzle");
  match_cmd->add_option("input", match.input, "Directory of descriptor files")->required()->check(CLI::ExistingDirectory);
  match_cmd->add_option("--out", match.out, "Output directory")->capture_default_str();
  match_cmd->add_option("--shifts", match.shifts, "Comma-separated shift candidates, px")->capture_default_str();
  match_cmd->add_option("--length-gate", match.length_gate, "Minimum length ratio")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  try {
    if (*synth_cmd) {
      synth::write_puzzle(synth::generate(spec), synth_out);
      return 0;
    }
    if (*pipe_cmd) return run_pipeline(pipe);
    if (*match_cmd) return run_match(match);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPipeline;
  }
  return 0;
}
