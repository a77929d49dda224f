#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "common.hpp"
#include "deid/hull.hpp"

using namespace deid;

namespace {

std::vector<Point3> sorted_vertices(const TriMesh& m) {
  auto v = m.vertices;
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<Point3> random_ball_points(std::size_t n, double r, Seed seed) {
  SeedStream s(seed);
  std::set<Point3> pts;
  while (pts.size() < n) {
    const double x = (2 * s.uniform() - 1) * r, y = (2 * s.uniform() - 1) * r, z = (2 * s.uniform() - 1) * r;
    if (x * x + y * y + z * z > r * r) continue;
    pts.insert({static_cast<int>(std::lround(x + 32)), static_cast<int>(std::lround(y + 32)),
                static_cast<int>(std::lround(z + 32))});
  }
  return {pts.begin(), pts.end()};
}

// Exact: every point on or behind every triangle plane, Euler characteristic 2.
void check_convex(const TriMesh& m, const std::vector<Point3>& pts) {
  for (const auto& t : m.triangles) {
    const Point3 &a = m.vertices[t[0]], &b = m.vertices[t[1]], &c = m.vertices[t[2]];
    const std::int64_t u0 = b.p0 - a.p0, u1 = b.p1 - a.p1, u2 = b.p2 - a.p2;
    const std::int64_t v0 = c.p0 - a.p0, v1 = c.p1 - a.p1, v2 = c.p2 - a.p2;
    const std::int64_t n0 = u1 * v2 - u2 * v1, n1 = u2 * v0 - u0 * v2, n2 = u0 * v1 - u1 * v0;
    REQUIRE((n0 != 0 || n1 != 0 || n2 != 0));
    for (const auto& p : pts) {
      const std::int64_t d = n0 * (p.p0 - a.p0) + n1 * (p.p1 - a.p1) + n2 * (p.p2 - a.p2);
      CHECK(d <= 0);
    }
  }
  const std::size_t f = m.triangles.size();
  CHECK(f % 2 == 0);
  CHECK(static_cast<long>(m.vertices.size()) - static_cast<long>(3 * f / 2) + static_cast<long>(f) == 2);
  std::set<Point3> input(pts.begin(), pts.end());
  for (const auto& v : m.vertices) CHECK(input.count(v) == 1);
}

}  // namespace

TEST_CASE("convex_hull small cases") {
  const std::vector<Point3> tet{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const TriMesh m = convex_hull(tet);
  CHECK(m.vertices.size() == 4);
  CHECK(m.triangles.size() == 4);
  CHECK(m.is_valid(2));
  check_convex(m, tet);

  std::vector<Point3> cube;
  for (int a : {0, 63})
    for (int b : {0, 63})
      for (int c : {0, 63}) cube.push_back({a, b, c});
  auto with_interior = cube;
  SeedStream s(1);
  for (int i = 0; i < 50; ++i) {
    with_interior.push_back({1 + static_cast<int>(s.below(62)), 1 + static_cast<int>(s.below(62)),
                             1 + static_cast<int>(s.below(62))});
  }
  auto corners = cube;
  std::sort(corners.begin(), corners.end());
  const TriMesh cm = convex_hull(with_interior);
  CHECK(sorted_vertices(cm) == corners);
  CHECK(brute_force_hull(with_interior) == corners);
  CHECK(cm.triangles.size() == 12);
  check_convex(cm, with_interior);

  auto centered = cube;
  centered.push_back({31, 31, 31});
  CHECK(brute_force_hull(centered) == corners);
  CHECK(brute_force_hull(tet).size() == 4);
}

TEST_CASE("convex_hull errors") {
  CHECK(testing::error_code_of([] { convex_hull(std::vector<Point3>{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}); }) ==
        ErrorCode::TooFewPoints);
  std::vector<Point3> flat;
  SeedStream s(2);
  for (int i = 0; i < 100; ++i) {
    const int a = static_cast<int>(s.below(40)), b = static_cast<int>(s.below(40));
    flat.push_back({a, b, a + b});
  }
  CHECK(testing::error_code_of([&] { convex_hull(flat); }) == ErrorCode::DegenerateInput);
  std::vector<Point3> line;
  for (int i = 0; i < 10; ++i) line.push_back({i, 2 * i, 3 * i});
  CHECK(testing::error_code_of([&] { convex_hull(line); }) == ErrorCode::DegenerateInput);
  std::vector<Point3> many(61);
  for (int i = 0; i < 61; ++i) many[i] = {i, i * i % 17, i * 7 % 13};
  CHECK(testing::error_code_of([&] { brute_force_hull(many); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("convex_hull matches the brute-force oracle") {
  for (int t = 0; t < 100; ++t) {
    const auto pts = random_ball_points(30, 10.0, derive_seed(100, t));
    const TriMesh m = convex_hull(pts);
    CHECK(sorted_vertices(m) == brute_force_hull(pts));
    CHECK(m.is_valid(64));
  }
}

TEST_CASE("convex_hull on larger clouds") {
  for (int t = 0; t < 5; ++t) {
    const auto pts = random_ball_points(3000, 25.0, derive_seed(200, t));
    const TriMesh m = convex_hull(pts);
    CHECK(m.is_valid(64));
    check_convex(m, pts);

    auto shuffled = pts;
    SeedStream s(t);
    std::shuffle(shuffled.begin(), shuffled.end(), s.engine());
    CHECK(sorted_vertices(convex_hull(shuffled)) == sorted_vertices(m));
  }
  // lattice points: many coplanar and collinear boundary points
  std::vector<Point3> grid;
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      for (int c = 0; c < 6; ++c) grid.push_back({a * 3, b * 3, c * 3});
  const TriMesh g = convex_hull(grid);
  CHECK(g.vertices.size() == 8);
  check_convex(g, grid);
}

TEST_CASE("voxelize_hull") {
  SUBCASE("full-domain cube") {
    std::vector<Point3> cube;
    for (int a : {0, 15})
      for (int b : {0, 15})
        for (int c : {0, 15}) cube.push_back({a, b, c});
    CHECK(voxelize_hull(convex_hull(cube), 16, std::nullopt, 0).count_nonzero() == 16 * 16 * 16);
  }
  SUBCASE("sphere volume") {
    std::vector<Point3> shell;
    for (int a = 0; a < 64; ++a)
      for (int b = 0; b < 64; ++b)
        for (int c = 0; c < 64; ++c) {
          const double d = std::hypot(a - 31.5, b - 31.5, c - 31.5);
          if (d <= 12.0 && d > 10.5) shell.push_back({a, b, c});
        }
    CHECK(shell.size() >= 2000);
    const Volume v = voxelize_hull(convex_hull(shell), 64, std::nullopt, 0);
    const double want = 4.0 / 3.0 * std::numbers::pi * 12 * 12 * 12;
    CHECK(std::abs(static_cast<double>(v.count_nonzero()) - want) / want < 0.05);
    for (const auto& p : shell) CHECK(v(p.p0, p.p1, p.p2) == 1.0f);
  }
  SUBCASE("single plane of a tetrahedron") {
    const std::vector<Point3> tet{{2, 2, 2}, {12, 2, 2}, {2, 12, 2}, {2, 2, 12}};
    const TriMesh m = convex_hull(tet);
    const Volume one = voxelize_hull(m, 16, 1, 3);
    // the chosen plane is one of the four; the result must equal exactly one half-space
    int matches = 0;
    for (const auto& t : m.triangles) {
      const Point3 &a = m.vertices[t[0]], &b = m.vertices[t[1]], &c = m.vertices[t[2]];
      const long u0 = b.p0 - a.p0, u1 = b.p1 - a.p1, u2 = b.p2 - a.p2;
      const long v0 = c.p0 - a.p0, v1 = c.p1 - a.p1, v2 = c.p2 - a.p2;
      const long n0 = u1 * v2 - u2 * v1, n1 = u2 * v0 - u0 * v2, n2 = u0 * v1 - u1 * v0;
      Volume half = Volume::cube(16);
      for (std::size_t i = 0; i < half.size(); ++i) {
        const Point3 k = half.coords(i);
        half[i] = n0 * (k.p0 - a.p0) + n1 * (k.p1 - a.p1) + n2 * (k.p2 - a.p2) <= 0 ? 1.0f : 0.0f;
      }
      matches += half.bit_equal(one);
    }
    CHECK(matches == 1);
  }
  SUBCASE("monotone in the triangle set and convex") {
    const auto pts = random_ball_points(400, 20.0, 9);
    const TriMesh m = convex_hull(pts);
    const Volume all = voxelize_hull(m, 64, std::nullopt, 0);
    for (int k : {1, 5, 20, 100}) {
      const Volume part = voxelize_hull(m, 64, k, derive_seed(4, k));
      for (std::size_t i = 0; i < all.size(); ++i) {
        if (all[i] == 1.0f) REQUIRE(part[i] == 1.0f);
      }
    }
    for (const auto& p : pts) CHECK(all(p.p0, p.p1, p.p2) == 1.0f);

    std::vector<std::size_t> set;
    for (std::size_t i = 0; i < all.size(); ++i)
      if (all[i] == 1.0f) set.push_back(i);
    SeedStream s(10);
    int bad = 0;
    for (int t = 0; t < 10000; ++t) {
      const Point3 a = all.coords(set[s.below(set.size())]), b = all.coords(set[s.below(set.size())]);
      const auto m0 = static_cast<std::size_t>((a.p0 + b.p0) / 2), m1 = static_cast<std::size_t>((a.p1 + b.p1) / 2),
                 m2 = static_cast<std::size_t>((a.p2 + b.p2) / 2);
      bool ok = false;
      for (int d0 = -1; d0 <= 1 && !ok; ++d0)
        for (int d1 = -1; d1 <= 1 && !ok; ++d1)
          for (int d2 = -1; d2 <= 1 && !ok; ++d2) ok = all(m0 + d0, m1 + d1, m2 + d2) == 1.0f;
      bad += !ok;
    }
    CHECK(bad == 0);
  }
  SUBCASE("errors and determinism") {
    const auto pts = random_ball_points(100, 10.0, 1);
    const TriMesh m = convex_hull(pts);
    CHECK(testing::error_code_of([&] { voxelize_hull(m, 64, 0, 0); }) == ErrorCode::InvalidCount);
    CHECK(voxelize_hull(m, 64, 10, 5).bit_equal(voxelize_hull(m, 64, 10, 5)));
  }
}

TEST_CASE("write_off") {
  const std::vector<Point3> tet{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  std::ostringstream os;
  write_off(convex_hull(tet), os);
  std::istringstream in(os.str());
  std::string magic;
  std::size_t nv = 0, nf = 0, ne = 0;
  in >> magic >> nv >> nf >> ne;
  CHECK(magic == "OFF");
  CHECK(nv == 4);
  CHECK(nf == 4);
  for (std::size_t i = 0; i < nv; ++i) {
    double x, y, z;
    in >> x >> y >> z;
  }
  for (std::size_t i = 0; i < nf; ++i) {
    int three, a, b, c;
    in >> three >> a >> b >> c;
    CHECK(three == 3);
    CHECK(a < 4);
  }
  CHECK(static_cast<bool>(in));
}
