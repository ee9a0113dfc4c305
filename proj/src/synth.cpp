#include "cbs/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

#include <json.hpp>

#include "cbs/error.hpp"
#include "cbs/io.hpp"

namespace cbs::synth {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Stream ids. Cut shapes use the cut index directly.
constexpr std::uint64_t kRotationStream = 1ull << 20;
constexpr std::uint64_t kShuffleStream = 1ull << 21;
constexpr std::uint64_t kNoiseStream = 1ull << 22;

EdgeShape draw_shape(const CounterRng& rng, double amplitude, double piece_size) {
  EdgeShape e;
  e.flat = false;
  e.sign = rng.uniform(0) < 0.5 ? -1.0 : 1.0;
  e.size = amplitude / (3.0 * piece_size) * rng.uniform(1, 0.7, 1.0);
  e.shift = rng.uniform(2, -0.15, 0.15);
  e.lift = rng.uniform(3, 0.0, 0.05);
  e.neck = e.size * rng.uniform(4, -0.6, 0.6);
  e.width = rng.uniform(5, 0.85, 1.3);
  e.tilt = rng.uniform(6, -0.25, 0.25);
  e.depth = rng.uniform(7, 0.7, 1.2);
  return e;
}

using Ring = std::vector<Point2>;

// Image coordinates (y down). Traversal is clockwise on screen. Cuts are
// walked forward by the piece below (right of) them and backward by the
// piece above (left of) them, so mating sides share every point.
Ring piece_outline(const SynthSpec& spec, const std::vector<EdgeShape>& hcuts, const std::vector<EdgeShape>& vcuts,
                   int r, int c, double margin) {
  const double s = spec.piece_size;
  const EdgeShape flat{};
  auto hcut = [&](int row) -> const EdgeShape& {
    return row == 0 || row == spec.rows ? flat : hcuts[static_cast<std::size_t>((row - 1) * spec.cols + c)];
  };
  auto vcut = [&](int col) -> const EdgeShape& {
    return col == 0 || col == spec.cols ? flat : vcuts[static_cast<std::size_t>(r * (spec.cols - 1) + col - 1)];
  };
  // Full cut including its end point, in the cut's own direction.
  auto full = [&](const EdgeShape& e) {
    std::vector<Point2> pts = e.curve(s);
    pts.push_back({s, 0.0});
    return pts;
  };
  Ring ring;
  {
    const auto pts = full(hcut(r));
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) ring.push_back({margin + pts[i].x, margin + pts[i].y});
  }
  {
    const auto pts = full(vcut(c + 1));
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) ring.push_back({margin + s + pts[i].y, margin + pts[i].x});
  }
  {
    const auto pts = full(hcut(r + 1));
    for (std::size_t i = pts.size() - 1; i > 0; --i) ring.push_back({margin + pts[i].x, margin + s + pts[i].y});
  }
  {
    const auto pts = full(vcut(c));
    for (std::size_t i = pts.size() - 1; i > 0; --i) ring.push_back({margin + pts[i].y, margin + pts[i].x});
  }
  return ring;
}

void add_noise(Ring& ring, double sigma, const CounterRng& rng) {
  if (sigma <= 0.0) return;
  const std::size_t n = ring.size();
  Ring out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 t = ring[(i + 1) % n] - ring[(i + n - 1) % n];
    const double len = norm(t);
    const Point2 outward = len > 0.0 ? Point2{t.y / len, -t.x / len} : Point2{};
    const double d = std::clamp(sigma * rng.normal(i), -2.5 * sigma, 2.5 * sigma);
    out[i] = ring[i] + d * outward;
  }
  ring = std::move(out);
}

RasterMask rasterize(const Ring& ring, int size) {
  RasterMask mask(size, size);
  std::vector<double> xs;
  for (int row = 0; row < size; ++row) {
    const double y = row + 0.5;
    xs.clear();
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const Point2 a = ring[i];
      const Point2 b = ring[(i + 1) % ring.size()];
      if ((a.y <= y) == (b.y <= y)) continue;
      xs.push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
      const int c0 = std::max(0, static_cast<int>(std::ceil(xs[k] - 0.5)));
      const int c1 = std::min(size - 1, static_cast<int>(std::ceil(xs[k + 1] - 0.5)) - 1);
      for (int col = c0; col <= c1; ++col) mask.set(col, row, true);
    }
  }
  return mask;
}

// Keeps the largest 8-connected foreground component and fills its holes.
void clean_mask(RasterMask& mask) {
  const int w = mask.width;
  const int h = mask.height;
  std::vector<int> label(mask.bits.size(), -1);
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < mask.bits.size(); ++start) {
    if (!mask.bits[start] || label[start] >= 0) continue;
    const int id = static_cast<int>(sizes.size());
    sizes.push_back(0);
    label[start] = id;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      ++sizes.back();
      const int pc = static_cast<int>(p % w);
      const int pr = static_cast<int>(p / w);
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          if (!mask.get(pc + dc, pr + dr)) continue;
          const std::size_t q = static_cast<std::size_t>(pr + dr) * w + (pc + dc);
          if (label[q] >= 0) continue;
          label[q] = id;
          stack.push_back(q);
        }
      }
    }
  }
  if (sizes.empty()) return;
  const int keep = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  for (std::size_t i = 0; i < mask.bits.size(); ++i) mask.bits[i] = label[i] == keep ? 1 : 0;

  // Background reachable from the frame (4-connected) stays; the rest is a hole.
  std::vector<std::uint8_t> outside(mask.bits.size(), 0);
  for (int c = 0; c < w; ++c) {
    for (int r : {0, h - 1}) stack.push_back(static_cast<std::size_t>(r) * w + c);
  }
  for (int r = 0; r < h; ++r) {
    for (int c : {0, w - 1}) stack.push_back(static_cast<std::size_t>(r) * w + c);
  }
  while (!stack.empty()) {
    const std::size_t p = stack.back();
    stack.pop_back();
    if (mask.bits[p] || outside[p]) continue;
    outside[p] = 1;
    const int pc = static_cast<int>(p % w);
    const int pr = static_cast<int>(p / w);
    if (pc > 0) stack.push_back(p - 1);
    if (pc + 1 < w) stack.push_back(p + 1);
    if (pr > 0) stack.push_back(p - static_cast<std::size_t>(w));
    if (pr + 1 < h) stack.push_back(p + static_cast<std::size_t>(w));
  }
  for (std::size_t i = 0; i < mask.bits.size(); ++i) {
    if (!outside[i]) mask.bits[i] = 1;
  }
}

}  // namespace

void SynthSpec::validate() const {
  if (rows < 1 || cols < 1) throw Error(ErrorCode::InvalidArgument, "rows and cols must be at least 1");
  if (!(noise_sigma >= 0.0)) throw Error(ErrorCode::InvalidArgument, "noise sigma must be non-negative");
  if (!(piece_size >= 32.0)) throw Error(ErrorCode::InvalidArgument, "piece size must be at least 32 px");
  if (!(tab_amplitude >= 0.0) || tab_amplitude > 0.35 * piece_size) {
    throw Error(ErrorCode::InvalidArgument, "tab amplitude must lie in [0, 0.35 * piece size]");
  }
}

std::uint64_t CounterRng::bits(std::uint64_t counter) const {
  return splitmix64(splitmix64(splitmix64(seed_) ^ stream_) ^ counter);
}

double CounterRng::uniform(std::uint64_t counter) const {
  return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
}

double CounterRng::uniform(std::uint64_t counter, double lo, double hi) const {
  return lo + (hi - lo) * uniform(counter);
}

double CounterRng::normal(std::uint64_t counter) const {
  const double u1 = 1.0 - uniform(2 * counter);  // (0, 1]
  const double u2 = uniform(2 * counter + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<Point2> EdgeShape::curve(double length) const {
  std::vector<Point2> dense;
  if (flat) {
    const int n = static_cast<int>(std::lround(length));
    for (int i = 0; i < n; ++i) dense.push_back({length * i / n, 0.0});
    return dense;
  }
  const double t = size;
  const double b = shift;
  const double c = lift;
  const double d = neck;
  const double w = width;
  const double k = depth * t;
  const double a = tilt * t;
  // Head controls sit on the neck tangents so the joins stay smooth.
  const Point2 n0{0.5 + b + d, -k + c};
  const Point2 j0{0.5 - w * t + b, t + c};
  const Point2 j1{0.5 + w * t + b, t + c};
  const Point2 h0 = j0 + (2 * t + a) / (t + k) * (j0 - n0);
  const Point2 h1 = j1 + (2 * t - a) / (t + k) * (j1 - n0);
  const std::array<Point2, 10> p{{{0.0, 0.0}, {0.2, 0.0}, n0, j0, h0, h1, j1, n0, {0.8, 0.0}, {1.0, 0.0}}};
  auto bezier = [](Point2 a, Point2 b1, Point2 b2, Point2 e, double u) {
    const double w = 1.0 - u;
    return w * w * w * a + 3 * w * w * u * b1 + 3 * w * u * u * b2 + u * u * u * e;
  };
  constexpr int kSteps = 2000;
  for (int seg = 0; seg < 3; ++seg) {
    const std::size_t o = static_cast<std::size_t>(3 * seg);
    for (int i = 0; i < kSteps; ++i) {
      const Point2 q = bezier(p[o], p[o + 1], p[o + 2], p[o + 3], static_cast<double>(i) / kSteps);
      dense.push_back({q.x * length, sign * q.y * length});
    }
  }
  dense.push_back({length, 0.0});

  // Resample to roughly 1 px spacing.
  std::vector<double> arc(dense.size(), 0.0);
  for (std::size_t i = 1; i < dense.size(); ++i) arc[i] = arc[i - 1] + distance(dense[i - 1], dense[i]);
  const int n = std::max(1, static_cast<int>(std::lround(arc.back())));
  std::vector<Point2> out;
  out.reserve(static_cast<std::size_t>(n));
  std::size_t j = 0;
  for (int i = 0; i < n; ++i) {
    const double target = arc.back() * i / n;
    while (j + 1 < arc.size() && arc[j + 1] < target) ++j;
    const double span = arc[j + 1] - arc[j];
    const double f = span > 0.0 ? (target - arc[j]) / span : 0.0;
    out.push_back(dense[j] + f * (dense[j + 1] - dense[j]));
  }
  return out;
}

SynthPuzzle generate(const SynthSpec& spec) {
  spec.validate();
  SynthPuzzle puzzle;
  puzzle.spec = spec;
  const std::size_t n = static_cast<std::size_t>(spec.rows) * static_cast<std::size_t>(spec.cols);

  std::vector<EdgeShape> hcuts(static_cast<std::size_t>((spec.rows - 1) * spec.cols));
  std::vector<EdgeShape> vcuts(static_cast<std::size_t>(spec.rows * (spec.cols - 1)));
  std::uint64_t cut = 0;
  for (EdgeShape& e : hcuts) e = draw_shape(CounterRng(spec.seed, cut++), spec.tab_amplitude, spec.piece_size);
  for (EdgeShape& e : vcuts) e = draw_shape(CounterRng(spec.seed, cut++), spec.tab_amplitude, spec.piece_size);

  std::vector<std::size_t> ids(n);
  std::iota(ids.begin(), ids.end(), std::size_t{1});
  const CounterRng shuffle(spec.seed, kShuffleStream);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(shuffle.uniform(i) * static_cast<double>(i));
    std::swap(ids[i - 1], ids[std::min(j, i - 1)]);
  }

  const double margin = std::ceil(1.1 * spec.tab_amplitude + 2.5 * spec.noise_sigma + 6.0);
  const int size = static_cast<int>(std::lround(spec.piece_size + 2.0 * margin));
  const double half = 0.5 * size;

  puzzle.pieces.resize(n);
  for (int r = 0; r < spec.rows; ++r) {
    for (int c = 0; c < spec.cols; ++c) {
      const std::size_t g = static_cast<std::size_t>(r * spec.cols + c);
      SynthPiece& piece = puzzle.pieces[g];
      piece.id = std::to_string(ids[g]);
      piece.row = r;
      piece.col = c;
      piece.rotation = static_cast<int>(CounterRng(spec.seed, kRotationStream + g).uniform(0) * 4.0) & 3;
      Ring ring = piece_outline(spec, hcuts, vcuts, r, c, margin);
      add_noise(ring, spec.noise_sigma, CounterRng(spec.seed, kNoiseStream + g));
      // Clockwise quarter turns on screen about the canvas centre.
      for (Point2& p : ring) {
        for (int k = 0; k < piece.rotation; ++k) p = {2.0 * half - p.y, p.x};
      }
      piece.mask = rasterize(ring, size);
      clean_mask(piece.mask);
    }
  }
  return puzzle;
}

std::string truth_json(const SynthPuzzle& puzzle) {
  nlohmann::json cells = nlohmann::json::array();
  for (const SynthPiece& p : puzzle.pieces) cells.push_back({{"piece", p.id}, {"rotation", p.rotation}});
  nlohmann::json j{{"rows", puzzle.spec.rows}, {"cols", puzzle.spec.cols}, {"cells", cells}};
  return j.dump(1) + "\n";
}

void write_puzzle(const SynthPuzzle& puzzle, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const SynthPiece& p : puzzle.pieces) io::write_pbm(dir / (p.id + ".pbm"), p.mask);
  io::write_text(dir / "truth.json", truth_json(puzzle));
}

}  // namespace cbs::synth
