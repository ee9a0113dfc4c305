// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cbs/assembly.hpp"
#include "cbs/io.hpp"
#include "cbs/synth.hpp"
#include "experiments.hpp"
#include "oracles.hpp"
#include "puzzle.hpp"
#include "shapes.hpp"

namespace fs = std::filesystem;
using namespace cbs;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome solver_oracle() {
  std::mt19937_64 rng(2024);
  const int intervals = 1999;  // 2000 nodes
  const double length = 300.0;
  double worst = 0.0, slowest = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> nodes{0, intervals};
    std::uniform_int_distribution<int> pick(1, intervals - 1);
    while (nodes.size() < 10) {
      const int j = pick(rng);
      if (std::find(nodes.begin(), nodes.end(), j) == nodes.end()) nodes.push_back(j);
    }
    std::sort(nodes.begin(), nodes.end());
    std::uniform_real_distribution<double> g(-2.0, 2.0), c(std::log(1.0), std::log(1e5));
    ControlPolygon poly;
    std::vector<SupportSpec> sup;
    std::vector<int> at;
    std::vector<double> gaps, comp;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      poly.points.push_back({length * nodes[k] / intervals, 0.0});
      const SupportSpec s{g(rng), std::exp(c(rng))};
      sup.push_back(s);
      if (k > 0 && k + 1 < nodes.size()) {
        at.push_back(nodes[k]);
        gaps.push_back(s.gap);
        comp.push_back(s.compliance);
      }
    }
    const auto t0 = Clock::now();
    const auto sol = assemble_and_solve(poly, sup);
    slowest = std::max(slowest, seconds_since(t0));
    const auto fd = oracle::fd_beam(intervals, length, at, gaps, comp);
    double scale = 0.0;
    for (double w : fd) scale = std::max(scale, std::abs(w));
    for (std::size_t i = 0; i < sol.segment_count(); ++i) {
      for (int j = nodes[i]; j <= nodes[i + 1]; ++j) {
        const double t = length * (j - nodes[i]) / intervals;
        const double w = transfer(sol.segment(i).start, t).W;
        worst = std::max(worst, std::abs(w - fd[static_cast<std::size_t>(j)]) / scale);
      }
    }
  }
  return {worst <= 1e-6 && slowest < 0.05, fmt("max rel err %.2e, slowest solve %.3f ms", worst, slowest * 1e3)};
}

Outcome interpolation_limit() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> step(0.5, 3.0), height(-5.0, 5.0);
  double joint = 0.0, mid = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> xs{0.0}, ys{0.0};
    for (int i = 1; i < 25; ++i) {
      xs.push_back(xs.back() + step(rng));
      ys.push_back(i == 24 ? 0.0 : height(rng));
    }
    // Chord along the x axis; the normal points to -y, so gap = -y.
    ControlPolygon poly;
    std::vector<SupportSpec> sup;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      poly.points.push_back({xs[i], 0.0});
      sup.push_back({-ys[i], 0.0});
    }
    const auto sol = assemble_and_solve(poly, sup);
    const auto w = oracle::joint_deflections(sol);
    for (std::size_t i = 0; i < w.size(); ++i) joint = std::max(joint, std::abs(w[i] + ys[i]));
    const oracle::NaturalSpline ref(xs, ys);
    for (std::size_t i = 0; i < sol.segment_count(); ++i) {
      const double t = 0.5 * (xs[i + 1] - xs[i]);
      mid = std::max(mid, std::abs(-transfer(sol.segment(i).start, t).W - ref(xs[i] + t)));
    }
  }
  return {joint <= 1e-9 && mid <= 1e-6, fmt("max joint err %.2e, max midpoint err %.2e", joint, mid)};
}

Outcome suppression_law() {
  const double h = 10.0;
  double worst = 0.0;
  std::string detail;
  for (double r : {0.5, 1.0, 2.0}) {
    const double xi = r * h;
    const double expected = suppression(xi, h);
    const double got = experiment::suppression_ratio(xi, h);
    worst = std::max(worst, std::abs(got - expected) / expected);
    detail += fmt("%.4f/%.4f ", got, expected);
  }
  return {worst <= 0.05, detail + fmt("(measured/law), max rel err %.2f%%", 100 * worst)};
}

Outcome circle_curvature() {
  const double r = 80.0;
  const int size = 200;
  const Point2 c{100.0, 100.0};
  std::vector<Point2> poly;
  for (int i = 0; i < 3600; ++i) {
    const double a = 2 * std::numbers::pi * i / 3600.0;
    poly.push_back({c.x + r * std::cos(a), c.y + r * std::sin(a)});
  }
  const ContourSamples outline = trace_boundary(shapes::rasterize(poly, size, size));
  // Quarter from the top of the disc clockwise to its right-most point.
  const Point2 centre = shapes::to_lib(c, size);
  auto angle = [&](const Point2& p) { return std::atan2(p.y - centre.y, p.x - centre.x); };
  const std::size_t n = outline.points.size();
  std::size_t start = 0;
  double best = 1e9;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::abs(angle(outline.points[i]) - std::numbers::pi / 2);
    if (d < best) best = d, start = i;
  }
  ContourSamples side;
  side.closed = false;
  for (std::size_t k = 0; k < n; ++k) {
    const Point2& p = outline.points[(start + k) % n];
    const double a = angle(p);
    if (a < 0.0 || a > std::numbers::pi / 2 + 1e-9) break;
    side.points.push_back(p);
  }
  const SideFit fit = refine_side(side, SmoothingParams{});
  const CurvatureProfile& prof = fit.profile;
  double worst = 0.0, at = 0.0;
  for (std::size_t i = 0; i < prof.size(); ++i) {
    if (prof.s[i] < 0.1 * prof.length || prof.s[i] > 0.9 * prof.length) continue;
    const double e = std::abs(-prof.kappa[i] * r - 1.0);
    if (e > worst) worst = e, at = prof.s[i] / prof.length;
  }
  return {worst <= 0.02,
          fmt("%zu points, max rel err %.2f%% at s/L = %.3f", side.points.size(), 100 * worst, at)};
}

// A tabbed side from a synthetic piece.
ContourSamples tabbed_side() {
  synth::SynthSpec spec;
  spec.rows = 2;
  spec.cols = 2;
  spec.seed = 4;
  const auto puzzle = synth::generate(spec);
  const ContourSamples outline = remove_spurs(dedup_consecutive(trace_boundary(puzzle.pieces[0].mask)));
  const PieceContour pc = split_sides(outline, detect_corners(outline));
  for (const auto& s : pc.sides) {
    const double chord = distance(s.points.front(), s.points.back());
    if (cumulative_length(s.points).back() > 1.3 * chord) return s;
  }
  return pc.sides[0];
}

Outcome frame_invariance() {
  const ContourSamples side = tabbed_side();
  ContourSamples turned = side;
  for (auto& p : turned.points) p = rotate(p, 37.0 * std::numbers::pi / 180.0, {-40.0, 75.0});
  const SideFit a = refine_side(side, SmoothingParams{});
  const SideFit b = refine_side(turned, SmoothingParams{});
  double worst = 0.0;
  for (std::size_t i = 0; i < a.profile.size(); ++i) worst = std::max(worst, std::abs(a.profile.kappa[i] - b.profile.kappa[i]));
  return {a.profile.size() == b.profile.size() && worst <= 1e-6, fmt("max |dk| %.2e", worst)};
}

puzzle::Built& big_puzzle(double* build_seconds = nullptr) {
  static double secs = 0.0;
  static puzzle::Built b = [] {
    synth::SynthSpec spec;
    spec.rows = 6;
    spec.cols = 9;
    spec.noise_sigma = 1.5;
    spec.seed = 1;
    const auto t0 = Clock::now();
    auto built = puzzle::build(spec);
    secs = seconds_since(t0);
    return built;
  }();
  if (build_seconds) *build_seconds = secs;
  return b;
}

Outcome synthetic_assembly() {
  double build = 0.0;
  try {
    auto& b = big_puzzle(&build);
    const auto t0 = Clock::now();
    const PuzzleState state = assemble(b.pieces);
    const double total = build + seconds_since(t0);
    const int errors = puzzle::layout_errors(b, state);
    double worst = std::numeric_limits<double>::infinity();
    int weak = 0;
    for (const StepRecord& s : state.steps) {
      if (s.result.matches.empty()) continue;
      const double ratio = s.result.runner_up / s.result.energy;
      worst = std::min(worst, ratio);
      if (ratio < 3.0) ++weak;
    }
    return {errors == 0 && weak == 0 && total < 60.0,
            fmt("%d layout errors, min separation %.2fx, %d of %zu steps below 3x, %.1f s", errors, worst, weak,
                state.steps.size(), total)};
  } catch (const Error& e) {
    return {false, std::string("error: ") + e.what()};
  }
}

Outcome straight_classification() {
  try {
    auto& b = big_puzzle();
    double straight_max = 0.0, curved_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < b.pieces.size(); ++i) {
      const auto it = std::find_if(b.synth.pieces.begin(), b.synth.pieces.end(),
                                   [&](const auto& p) { return p.id == b.pieces[i].id; });
      const int rows = b.synth.spec.rows, cols = b.synth.spec.cols;
      const int expect = (it->row == 0) + (it->row == rows - 1) + (it->col == 0) + (it->col == cols - 1);
      std::vector<double> e;
      for (const auto& s : b.pieces[i].sides) e.push_back(s.energy);
      std::sort(e.begin(), e.end());
      for (int k = 0; k < 4; ++k) {
        if (k < expect) {
          straight_max = std::max(straight_max, e[static_cast<std::size_t>(k)]);
        } else {
          curved_min = std::min(curved_min, e[static_cast<std::size_t>(k)]);
        }
      }
    }
    const double sep = curved_min / straight_max;
    return {straight_max < kDefaultStraightEnergy && curved_min > kDefaultStraightEnergy && sep >= 10.0,
            fmt("straight max %.4g, tabbed min %.4g, separation %.1fx", straight_max, curved_min, sep)};
  } catch (const Error& e) {
    return {false, std::string("error: ") + e.what()};
  }
}

Outcome h_schedule() {
  const SideFit fit = refine_side(tabbed_side(), SmoothingParams{});
  const double want[] = {20.0, 16.667, 13.889, 11.574, 9.645};
  bool ok = fit.h_history.size() == 5 && schedule_solves(20.0, 10.0, 1.2) == 5;
  std::string got;
  for (std::size_t i = 0; i < fit.h_history.size(); ++i) {
    if (i < 5 && std::abs(fit.h_history[i] - want[i]) > 1e-3) ok = false;
    got += fmt("%.3f ", fit.h_history[i]);
  }
  return {ok, fmt("%zu solves: ", fit.h_history.size()) + got};
}

int run(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(CBS_BINARY) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome determinism() {
  const fs::path work = fs::temp_directory_path() / "cbs_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);
  std::string layouts[2];
  for (int k = 0; k < 2; ++k) {
    const fs::path dir = work / ("run" + std::to_string(k));
    const std::string d = dir.string();
    const fs::path log = work / ("run" + std::to_string(k) + ".log");
    if (run("synth --rows 3 --cols 4 --noise 1.5 --seed 11 --out " + d + "/pieces", log) != 0 ||
        run("pipeline " + d + "/pieces --no-svg --out " + d + "/desc", log) != 0 ||
        run("match " + d + "/desc --out " + d + "/asm", log) != 0) {
      return {false, "run " + std::to_string(k) + " failed: " + io::read_text(log)};
    }
    layouts[k] = io::read_text(dir / "asm" / "layout.json");
  }
  return {!layouts[0].empty() && layouts[0] == layouts[1], fmt("layout.json %zu bytes, identical: %s", layouts[0].size(),
                                                               layouts[0] == layouts[1] ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"solver matches finite-difference oracle", solver_oracle},
      {"rigid supports interpolate and match natural spline", interpolation_limit},
      {"suppression law", suppression_law},
      {"quarter-circle curvature", circle_curvature},
      {"rotation invariance", frame_invariance},
      {"synthetic 6x9 separation and assembly", synthetic_assembly},
      {"straight-side classification", straight_classification},
      {"h schedule", h_schedule},
      {"deterministic layout", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
