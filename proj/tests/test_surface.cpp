#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "common.hpp"
#include "deid/surface.hpp"

using namespace deid;

TEST_CASE("zeta") {
  CHECK(zeta({0, 1}, {5, 3, 9}, 128) == 122);
  CHECK(zeta({2, -1}, {5, 3, 9}, 128) == 9);
  CHECK(zeta({1, -1}, {0, 0, 0}, 128) == 0);
  CHECK(testing::error_code_of([] { zeta({0, 1}, {4, 0, 0}, 4); }) == ErrorCode::IndexOutOfRange);
  CHECK(testing::error_code_of([] { zeta({0, 1}, {0, -1, 0}, 4); }) == ErrorCode::IndexOutOfRange);
  CHECK(all_axis_directions().size() == 6);
  std::set<std::pair<int, int>> distinct;
  for (auto ad : all_axis_directions()) distinct.insert({ad.axis, ad.direction});
  CHECK(distinct.size() == 6);
}

TEST_CASE("intersection_map") {
  SUBCASE("lone voxel") {
    Volume m = Volume::cube(4);
    m(1, 2, 3) = 1.0f;
    for (auto ad : all_axis_directions()) CHECK(intersection_map(m, ad).bit_equal(m));
  }
  SUBCASE("block face") {
    const Volume m = testing::box(4, 1, 3);
    const Volume out = intersection_map(m, {0, -1});
    CHECK(out.count_nonzero() == 4);
    for (std::size_t j = 1; j < 3; ++j)
      for (std::size_t k = 1; k < 3; ++k) CHECK(out(1, j, k) == 1.0f);
    CHECK(out.bit_equal(testing::march_first_hits(m, {0, -1})));
  }
  SUBCASE("empty") {
    for (auto ad : all_axis_directions()) CHECK(intersection_map(Volume::cube(5), ad).count_nonzero() == 0);
  }
  SUBCASE("non-cubic") {
    CHECK(testing::error_code_of([] { intersection_map(Volume({2, 2, 3}), {0, 1}); }) == ErrorCode::NonCubicVolume);
  }
  SUBCASE("random masks against ray marching") {
    for (int t = 0; t < 40; ++t) {
      const Volume m = testing::random_mask(8, 0.05 + 0.02 * t, derive_seed(77, t));
      for (auto ad : all_axis_directions()) {
        const Volume out = intersection_map(m, ad);
        CHECK(out.bit_equal(testing::march_first_hits(m, ad)));
        for (std::size_t i = 0; i < m.size(); ++i) {
          if (out[i] == 1.0f) CHECK(m[i] == 1.0f);
        }
      }
    }
  }
  SUBCASE("one hit per occupied line") {
    const Volume m = testing::random_mask(8, 0.2, 3);
    const Volume out = intersection_map(m, {2, 1});
    for (std::size_t i = 0; i < 8; ++i)
      for (std::size_t j = 0; j < 8; ++j) {
        int hits = 0, occupied = 0;
        for (std::size_t k = 0; k < 8; ++k) hits += out(i, j, k) == 1.0f, occupied += m(i, j, k) == 1.0f;
        CHECK(hits == (occupied > 0 ? 1 : 0));
      }
  }
  SUBCASE("occluder moves the hit") {
    Volume m = Volume::cube(8);
    m(2, 5, 5) = 1.0f;
    m(2, 5, 6) = 1.0f;
    Volume out = intersection_map(m, {0, -1});
    CHECK(out(2, 5, 5) == 1.0f);
    m(0, 5, 5) = 1.0f;
    out = intersection_map(m, {0, -1});
    CHECK(out(0, 5, 5) == 1.0f);
    CHECK(out(2, 5, 5) == 0.0f);
    std::size_t line = 0;
    for (std::size_t i = 0; i < 8; ++i) line += out(i, 5, 5) == 1.0f;
    CHECK(line == 1);
  }
}

TEST_CASE("directional_average") {
  Volume lone = Volume::cube(4);
  lone(1, 2, 3) = 1.0f;
  CHECK(directional_average(lone)(1, 2, 3) == 1.0f);

  const Volume block = testing::box(4, 1, 3);
  const Volume avg = directional_average(block);
  double oracle = 0.0;
  for (auto ad : all_axis_directions()) oracle += testing::march_first_hits(block, ad)(1, 1, 1);
  CHECK(oracle == 3.0);
  CHECK(avg(1, 1, 1) == doctest::Approx(oracle / 6.0));
  CHECK(avg(1, 1, 1) == doctest::Approx(0.5));

  const Volume solid = testing::box(8, 2, 6);
  const Volume a8 = directional_average(solid);
  CHECK(a8(3, 3, 3) == 0.0f);
  CHECK(a8(4, 4, 3) == 0.0f);
  for (std::size_t i = 0; i < a8.size(); ++i) {
    CHECK(a8[i] >= 0.0f);
    CHECK(a8[i] <= 1.0f);
    if (solid[i] == 0.0f) CHECK(a8[i] == 0.0f);
  }
}

TEST_CASE("surface_representation") {
  SUBCASE("identity rotation collapses to the directional average") {
    Volume x = Volume::cube(10);
    for (std::size_t i = 2; i < 7; ++i)
      for (std::size_t j = 3; j < 9; ++j)
        for (std::size_t k = 1; k < 5; ++k) x(i, j, k) = 0.9f;
    const std::vector<Rotation> rots{Rotation::identity()};
    const Volume z = surface_representation(x, 0.5, rots);
    CHECK(z.bit_equal(directional_average(binarize(x, 0.5))));
  }
  SUBCASE("empty volume") {
    SurfaceParams p;
    p.rotations = 4;
    CHECK(surface_representation(Volume::cube(16), p).count_nonzero() == 0);
  }
  SUBCASE("ball band") {
    const std::size_t s = 64;
    const Volume x = testing::ball(s, 10.0, 0.9f);
    SurfaceParams p;
    p.seed = 5;
    const Volume z = surface_representation(x, p);
    CHECK(z.is_probability());
    const double c = (s - 1) / 2.0;
    double mass = 0.0, near = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (z[i] == 0.0f) continue;
      const Point3 k = z.coords(i);
      const double d = std::hypot(k.p0 - c, k.p1 - c, k.p2 - c);
      mass += z[i];
      if (std::abs(d - 10.0) <= 1.5) near += z[i];
    }
    CHECK(near / mass >= 0.95);
  }
  SUBCASE("deterministic and order-insensitive") {
    const Volume x = testing::random_mask(16, 0.3, 8);
    SurfaceParams p;
    p.rotations = 8;
    p.seed = 12;
    const Volume z1 = surface_representation(x, p);
    CHECK(surface_representation(x, p).bit_equal(z1));
    auto rots = surface_rotations(p);
    std::reverse(rots.begin(), rots.end());
    CHECK(surface_representation(x, p.delta, rots).bit_equal(z1));
  }
  SUBCASE("params") {
    SurfaceParams p;
    p.rotations = 0;
    CHECK(testing::error_code_of([&] { p.validate(); }) == ErrorCode::InvalidArgument);
    p.rotations = 1;
    p.point_cap = 3;
    CHECK(testing::error_code_of([&] { p.validate(); }) == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("sample_surface_points") {
  SUBCASE("certain voxels") {
    Volume z = Volume::cube(8);
    const std::vector<Point3> want{{0, 1, 2}, {1, 1, 1}, {3, 7, 0}, {5, 5, 5}, {7, 0, 7}};
    for (const auto& p : want) z(p.p0, p.p1, p.p2) = 1.0f;
    auto got = sample_surface_points(z, 1, 10000);
    std::sort(got.begin(), got.end());
    CHECK(got == want);
  }
  SUBCASE("half probability") {
    Volume z = Volume::cube(10);
    for (std::size_t i = 0; i < 1000; ++i) z[i] = 0.5f;
    for (Seed s = 0; s < 20; ++s) {
      const auto n = sample_surface_points(z, s, 10000).size();
      CHECK(n >= 400);
      CHECK(n <= 600);
    }
  }
  SUBCASE("cap and determinism") {
    const Volume z = Volume::cube(12, 1.0f);
    const auto a = sample_surface_points(z, 4, 100);
    CHECK(a.size() == 100);
    CHECK(sample_surface_points(z, 4, 100) == a);
    CHECK(std::set<Point3>(a.begin(), a.end()).size() == 100);
  }
  SUBCASE("threshold mode") {
    Volume z = Volume::cube(4);
    z[0] = 0.6f;
    z[1] = 0.4f;
    const auto pts = sample_surface_points(z, 0, 100, SurfaceSampling::Threshold, 0.5);
    CHECK(pts.size() == 1);
  }
  SUBCASE("empty") {
    CHECK(testing::error_code_of([] { sample_surface_points(Volume::cube(4), 0, 10); }) == ErrorCode::EmptySurface);
  }
}
