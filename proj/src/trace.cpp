#include <algorithm>
#include <array>
#include <vector>

#include "cbs/contour.hpp"
#include "cbs/error.hpp"

namespace cbs {

namespace {

// Image-space neighbour offsets, clockwise on screen starting east.
constexpr std::array<int, 8> kDx = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr std::array<int, 8> kDy = {0, 1, 1, 1, 0, -1, -1, -1};

int direction_of(int dx, int dy) {
  for (int d = 0; d < 8; ++d) {
    if (kDx[d] == dx && kDy[d] == dy) return d;
  }
  return -1;
}

struct Pixel {
  int col;
  int row;
  friend bool operator==(Pixel, Pixel) = default;
};

}  // namespace

int count_components(const RasterMask& mask) {
  std::vector<std::uint8_t> seen(mask.bits.size(), 0);
  std::vector<Pixel> stack;
  int components = 0;
  for (int r = 0; r < mask.height; ++r) {
    for (int c = 0; c < mask.width; ++c) {
      const std::size_t idx = static_cast<std::size_t>(r) * mask.width + c;
      if (!mask.bits[idx] || seen[idx]) continue;
      ++components;
      seen[idx] = 1;
      stack.push_back({c, r});
      while (!stack.empty()) {
        const Pixel p = stack.back();
        stack.pop_back();
        for (int d = 0; d < 8; ++d) {
          const int nc = p.col + kDx[d];
          const int nr = p.row + kDy[d];
          if (!mask.get(nc, nr)) continue;
          const std::size_t nidx = static_cast<std::size_t>(nr) * mask.width + nc;
          if (seen[nidx]) continue;
          seen[nidx] = 1;
          stack.push_back({nc, nr});
        }
      }
    }
  }
  return components;
}

ContourSamples trace_boundary(const RasterMask& mask) {
  const int components = count_components(mask);
  if (components == 0) throw Error(ErrorCode::EmptyMask, "mask has no foreground pixels");
  if (components > 1) {
    throw Error(ErrorCode::MultipleComponents, "mask has " + std::to_string(components) + " components");
  }

  Pixel start{-1, -1};
  for (int r = 0; r < mask.height && start.col < 0; ++r) {
    for (int c = 0; c < mask.width; ++c) {
      if (mask.get(c, r)) {
        start = {c, r};
        break;
      }
    }
  }

  // Finds the next boundary pixel clockwise from the backtrack direction.
  auto step = [&](Pixel p, int backtrack, Pixel& next, int& next_backtrack) {
    for (int k = 1; k <= 8; ++k) {
      const int d = (backtrack + k) % 8;
      const Pixel q{p.col + kDx[d], p.row + kDy[d]};
      if (mask.get(q.col, q.row)) {
        const int prev = (d + 7) % 8;
        const Pixel b{p.col + kDx[prev], p.row + kDy[prev]};
        next = q;
        next_backtrack = direction_of(b.col - q.col, b.row - q.row);
        return true;
      }
    }
    return false;
  };

  std::vector<Pixel> pixels{start};
  Pixel first_next{};
  int backtrack = 4;  // west of the first pixel is background by scan order
  Pixel p = start;
  const std::size_t cap = 4 * mask.bits.size() + 8;
  bool first = true;
  while (pixels.size() < cap) {
    Pixel q{};
    int nb = 0;
    if (!step(p, backtrack, q, nb)) break;  // isolated pixel
    if (!first && p == start && q == first_next) break;
    if (first) {
      first_next = q;
      first = false;
    }
    pixels.push_back(q);
    p = q;
    backtrack = nb;
  }
  if (pixels.size() > 1 && pixels.back() == start) pixels.pop_back();

  ContourSamples out;
  out.closed = true;
  out.points.reserve(pixels.size());
  for (const Pixel& px : pixels) out.points.push_back(pixel_to_point(mask, px.col, px.row));
  if (out.points.size() > 2 && signed_area(out.points) > 0.0) {
    std::reverse(out.points.begin() + 1, out.points.end());
  }
  return out;
}

}  // namespace cbs
