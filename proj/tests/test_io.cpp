#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <sstream>

#include "cbs/error.hpp"
#include "cbs/io.hpp"
#include "puzzle.hpp"
#include "shapes.hpp"

using namespace cbs;
namespace fs = std::filesystem;

namespace {

int error_line(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ParseError) return -2;
    const std::string w = e.what();
    // "ParseError: name:LINE: message"
    const auto at = w.find("name:");
    if (at == std::string::npos) return -3;
    return std::stoi(w.substr(at + 5));
  }
  return -1;
}

}  // namespace

TEST_CASE("pbm round trip, plain and raw") {
  RasterMask m(13, 5);
  m.set(0, 0, true);
  m.set(12, 4, true);
  m.set(7, 2, true);
  const fs::path dir = fs::temp_directory_path() / "cbs_io_test";
  fs::create_directories(dir);
  io::write_pbm(dir / "m.pbm", m);
  const auto back = io::read_pbm(dir / "m.pbm");
  CHECK(back.width == 13);
  CHECK(back.height == 5);
  CHECK(back.bits == m.bits);

  const auto plain = io::parse_pbm("P1\n# comment\n3 2\n1 0 1\n0 1 0\n");
  CHECK(plain.get(0, 0));
  CHECK_FALSE(plain.get(1, 0));
  CHECK(plain.get(1, 1));
  CHECK_THROWS_AS(io::parse_pbm("P2\n1 1\n0\n"), Error);
  CHECK_THROWS_AS(io::parse_pbm("P4\n8 2\n\x01"), Error);
}

TEST_CASE("malformed point file names the line") {
  const std::string text = "0 0\n1 0\n2 0\n# note\n\n3 0\n3 x\n";
  CHECK(error_line([&] { io::parse_points(text, "name"); }) == 7);
  CHECK(error_line([&] { io::parse_points("0 0 1\n", "name"); }) == 1);
  CHECK_THROWS_WITH_AS(io::parse_points("0 0\n1 1\n", "name"), doctest::Contains("at least 8"), Error);
  const auto ok = io::parse_points("0 0\n1,0\n2 0\n3 0\n3 1\n2 1\n1 1\n0 1 # last\n", "name");
  CHECK(ok.size() == 8);
}

TEST_CASE("descriptor round trip keeps energies bit for bit") {
  synth::SynthSpec spec;
  spec.rows = 2;
  spec.cols = 2;
  spec.noise_sigma = 1.0;
  spec.seed = 9;
  const auto b = puzzle::build(spec);
  for (const auto& d : b.files) {
    const auto text = io::descriptor_json(d);
    const auto back = io::parse_descriptor(text);
    CHECK(back.piece.id == d.piece.id);
    for (std::size_t k = 0; k < 4; ++k) {
      CHECK(back.piece.sides[k].energy == d.piece.sides[k].energy);
      CHECK(back.piece.sides[k].length == d.piece.sides[k].length);
      CHECK(back.piece.sides[k].cls == d.piece.sides[k].cls);
      CHECK(back.piece.sides[k].profile.kappa == d.piece.sides[k].profile.kappa);
      CHECK(back.corners[k] == d.corners[k]);
    }
    CHECK(io::descriptor_json(back) == text);
  }
  CHECK_THROWS_AS(io::parse_descriptor("{\"id\": \"1\"}"), Error);
  CHECK_THROWS_AS(io::parse_descriptor("not json"), Error);
}

TEST_CASE("profile csv is strictly increasing in s") {
  const int h = 420;
  const auto m = shapes::rasterize(shapes::cap_rect(60, 100, 200, 250, 50, 85), 320, h);
  const auto fit = process_piece(trace_boundary(m), {});
  const auto d = io::describe("tab", fit);
  CHECK(d.piece.sides[0].cls == SideClass::Convex);
  for (std::size_t k = 1; k < 4; ++k) CHECK(d.piece.sides[k].cls == SideClass::Straight);
  std::istringstream in(io::profile_csv(d.piece.sides[0].profile));
  std::string line;
  std::getline(in, line);
  CHECK(line == "s,kappa");
  double prev = -1.0;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    const double s = std::stod(line.substr(0, line.find(',')));
    CHECK(s > prev);
    prev = s;
    ++rows;
  }
  CHECK(rows == d.piece.sides[0].profile.size());
}

TEST_CASE("rectangle mask gives four straight sides") {
  const auto m = shapes::rasterize(shapes::rect(40, 40, 240, 200), 320, 280);
  const auto d = io::describe("rect", process_piece(trace_boundary(m), {}));
  for (const auto& s : d.piece.sides) {
    CHECK(s.cls == SideClass::Straight);
    CHECK(s.energy < 0.1);
  }
}

TEST_CASE("match table has one row per curved pair") {
  synth::SynthSpec spec;
  spec.rows = 2;
  spec.cols = 3;
  spec.seed = 2;
  const auto b = puzzle::build(spec);
  std::size_t curved = 0;
  for (const auto& p : b.pieces)
    for (const auto& s : p.sides) curved += s.cls != SideClass::Straight;
  const std::string csv = io::match_csv(b.pieces, {});
  const auto lines = static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n'));
  CHECK(lines == 1 + curved * (curved - 1) / 2);
}

TEST_CASE("layout json and error count") {
  const auto truth = io::parse_layout(R"({"rows": 1, "cols": 2, "cells": [{"piece": "1", "rotation": 0}, {"piece": "2", "rotation": 1}]})");
  CHECK(io::layout_errors(truth, truth) == 0);
  // The same layout turned upside down still counts as correct.
  const auto flipped = io::parse_layout(R"({"rows": 1, "cols": 2, "cells": [{"piece": "2", "rotation": 3}, {"piece": "1", "rotation": 2}]})");
  CHECK(io::layout_errors(truth, flipped) == 0);
  const auto wrong = io::parse_layout(R"({"rows": 1, "cols": 2, "cells": [{"piece": "1", "rotation": 0}, {"piece": "2", "rotation": 0}]})");
  CHECK(io::layout_errors(truth, wrong) == 1);
  CHECK_THROWS_AS(io::parse_layout(R"({"rows": 2, "cols": 2, "cells": []})"), Error);
}

TEST_CASE("svg output is self-contained") {
  synth::SynthSpec spec;
  spec.rows = 2;
  spec.cols = 2;
  spec.seed = 3;
  const auto b = puzzle::build(spec);
  const auto st = assemble(b.pieces);
  const auto svg = io::assembled_svg(st, b.files);
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("href") == std::string::npos);
  CHECK(svg.find("http://www.w3.org/2000/svg") != std::string::npos);
  const auto fit = process_piece(trace_boundary(b.synth.pieces[0].mask), {});
  const auto one = io::piece_svg(fit);
  CHECK(one.find("href") == std::string::npos);
  CHECK(std::count(one.begin(), one.end(), '<') == std::count(one.begin(), one.end(), '>'));
}
