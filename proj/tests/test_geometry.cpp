#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cbs/error.hpp"
#include "cbs/geometry.hpp"

using namespace cbs;

TEST_CASE("frames of axis-aligned segments") {
  auto f = build_frames({{{0, 0}, {2, 0}}});
  REQUIRE(f.size() == 1);
  CHECK(f[0].length == 2.0);
  CHECK(f[0].tangent == Point2{1, 0});
  CHECK(f[0].normal == Point2{0, -1});
  CHECK_FALSE(f[0].misalignment.has_value());

  f = build_frames({{{0, 0}, {0, 3}}});
  CHECK(f[0].length == 3.0);
  CHECK(f[0].tangent == Point2{0, 1});
  CHECK(f[0].normal == Point2{1, 0});
}

TEST_CASE("frames match heading-angle oracle") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  ControlPolygon poly;
  for (int i = 0; i < 50; ++i) poly.points.push_back({u(rng), u(rng)});
  const auto f = build_frames(poly);
  REQUIRE(f.size() == 49);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Point2 d = poly.points[i + 1] - poly.points[i];
    const double heading = std::atan2(d.y, d.x);
    CHECK(std::abs(f[i].tangent.x - std::cos(heading)) < 1e-12);
    CHECK(std::abs(f[i].tangent.y - std::sin(heading)) < 1e-12);
    CHECK(std::abs(f[i].normal.x - std::cos(heading - std::numbers::pi / 2)) < 1e-12);
    CHECK(std::abs(f[i].normal.y - std::sin(heading - std::numbers::pi / 2)) < 1e-12);
    CHECK(f[i].normal.x == f[i].tangent.y);
    CHECK(f[i].normal.y == -f[i].tangent.x);
    CHECK(std::abs(dot(f[i].tangent, f[i].normal)) < 1e-12);
    CHECK(std::abs(norm(f[i].tangent) - 1.0) < 1e-12);
  }
}

TEST_CASE("zero-length segment is rejected") {
  try {
    build_frames({{{1, 1}, {1, 1}, {2, 2}}});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroLengthSegment);
  }
}

TEST_CASE("misalignment angles") {
  SUBCASE("collinear") {
    const auto f = build_frames({{{0, 0}, {1, 1}, {3, 3}}});
    CHECK(std::abs(*f[0].misalignment) < 1e-15);
  }
  SUBCASE("right turn is clockwise positive") {
    const auto f = build_frames({{{0, 0}, {1, 0}, {1, -1}}});
    CHECK(std::abs(*f[0].misalignment - std::numbers::pi / 2) < 1e-15);
  }
  SUBCASE("clockwise square turns a full circle") {
    ControlPolygon sq{{{0, 0}, {0, 1}, {1, 1}, {1, 0}, {0, 0}, {0, 1}}};
    const auto psi = misalignment_angles(build_frames(sq));
    REQUIRE(psi.size() == 4);
    double sum = 0.0;
    for (double p : psi) sum += p;
    CHECK(std::abs(sum - 2 * std::numbers::pi) < 1e-12);
  }
}

TEST_CASE("signed gap") {
  const auto f = build_frames({{{0, 0}, {2, 0}}})[0];
  CHECK(signed_gap({0, 0}, f, {0, -2}) == 2.0);
  CHECK(signed_gap({0, 0}, f, {0, 1}) == -1.0);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 100; ++i) {
    const Point2 p0{u(rng), u(rng)}, p1{u(rng), u(rng)}, a{u(rng), u(rng)}, b{u(rng), u(rng)};
    const auto fr = build_frames({{p0, p1}})[0];
    const double expect = (b.x - a.x) * fr.normal.x + (b.y - a.y) * fr.normal.y;
    CHECK(std::abs(signed_gap(a, fr, b) - expect) < 1e-12);
  }
}

TEST_CASE("dedup and spur removal") {
  ContourSamples c{{{0, 0}, {0, 0}, {1, 0}, {2, 0}, {2, 0}}, false};
  CHECK(dedup_consecutive(c).size() == 3);

  ContourSamples ring{{{0, 0}, {1, 0}, {2, 0}, {3, 0}, {2, 0}, {2, -1}, {0, -1}, {0, 0}}, true};
  const auto clean = remove_spurs(ring);
  for (std::size_t i = 0; i < clean.size(); ++i) {
    const Point2 a = clean.points[i];
    const Point2 c2 = clean.points[(i + 2) % clean.size()];
    CHECK_FALSE(a == c2);
  }
  CHECK(clean.size() == 5);
}

TEST_CASE("signed area sign and cumulative length") {
  const std::vector<Point2> cw{{0, 0}, {0, 1}, {1, 1}, {1, 0}};
  CHECK(signed_area(cw) == doctest::Approx(-1.0));
  const auto cum = cumulative_length(cw);
  REQUIRE(cum.size() == 4);
  CHECK(cum.back() == doctest::Approx(3.0));
}
