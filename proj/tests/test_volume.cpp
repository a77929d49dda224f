#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>

#include "common.hpp"
#include "deid/volume.hpp"

using namespace deid;

TEST_CASE("binarize") {
  CHECK(binarize(Volume::cube(4), 0.1).count_nonzero() == 0);

  Volume x = Volume::cube(4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t k = 0; k < 4; ++k) x(i, j, k) = static_cast<float>(i);
  const Volume m = binarize(x, 2.0);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t k = 0; k < 4; ++k) CHECK(m(i, j, k) == (i >= 2 ? 1.0f : 0.0f));

  CHECK(binarize(Volume::cube(3, 0.5f), 0.2).count_nonzero() == 27);
  CHECK(testing::error_code_of([&] { binarize(x, NAN); }) == ErrorCode::InvalidThreshold);
  CHECK(testing::error_code_of([&] { binarize(x, INFINITY); }) == ErrorCode::InvalidThreshold);

  SUBCASE("idempotent on masks") {
    SeedStream s(3);
    Volume r = Volume::cube(8);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = static_cast<float>(s.uniform());
    const Volume b = binarize(r, 0.4);
    CHECK(binarize(b, 0.5).bit_equal(b));
  }
}

TEST_CASE("volume construction") {
  CHECK(testing::error_code_of([] { Volume({2, 2, 2}, std::vector<float>(7)); }) == ErrorCode::DimMismatch);
  Volume v({2, 3, 4});
  CHECK(v.size() == 24);
  CHECK(testing::error_code_of([&] { (void)v.side(); }) == ErrorCode::NonCubicVolume);
  const Point3 p = v.coords(v.index(1, 2, 3));
  CHECK(p == Point3{1, 2, 3});
}

TEST_CASE("otsu threshold") {
  SUBCASE("bimodal halves split exactly") {
    Volume x = Volume::cube(8);
    for (std::size_t i = 0; i < x.size() / 2; ++i) x[i] = 1.0f;
    const double t = otsu_threshold(x);
    CHECK(t > 0.0);
    CHECK(t < 1.0);
    CHECK(binarize(x, t).count_nonzero() == x.size() / 2);
  }
  SUBCASE("maximizes between-class variance over all 256-bin cuts") {
    SeedStream rs(21);
    Volume x = Volume::cube(10);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = static_cast<float>(rs.uniform() < 0.4 ? 0.2 + 0.05 * rs.normal() : 0.7 + 0.1 * rs.normal());
    }
    float lo = x[0], hi = x[0];
    for (float v : x.data()) lo = std::min(lo, v), hi = std::max(hi, v);
    const double width = (static_cast<double>(hi) - lo) / 256.0;
    std::vector<double> hist(256, 0.0);
    for (float v : x.data()) hist[std::min<std::size_t>(255, static_cast<std::size_t>((v - lo) / width))] += 1.0;
    auto between = [&](int cut) {
      double w0 = 0, m0 = 0, w1 = 0, m1 = 0;
      for (int b = 0; b < 256; ++b) {
        const double c = lo + (b + 0.5) * width;
        if (b < cut) w0 += hist[b], m0 += hist[b] * c;
        else w1 += hist[b], m1 += hist[b] * c;
      }
      if (w0 == 0 || w1 == 0) return 0.0;
      return w0 * w1 * std::pow(m0 / w0 - m1 / w1, 2);
    };
    double best = 0.0;
    for (int cut = 1; cut < 256; ++cut) best = std::max(best, between(cut));
    const double t = otsu_threshold(x);
    const int cut = static_cast<int>(std::round((t - lo) / width));
    CHECK(between(cut) >= best * (1 - 1e-12));
  }
  SUBCASE("constant") {
    CHECK(testing::error_code_of([] { otsu_threshold(Volume::cube(4, 0.3f)); }) == ErrorCode::DegenerateHistogram);
  }
  SUBCASE("background vs head") {
    const std::size_t s = 32;
    const Volume truth = testing::ball(s, 10.0);
    SeedStream rs(11);
    Volume x = Volume::cube(s);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = static_cast<float>(truth[i] == 1.0f ? 0.8 + 0.05 * rs.normal() : std::abs(0.05 + 0.01 * rs.normal()));
    }
    const Volume m = binarize(x, otsu_threshold(x));
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < x.size(); ++i) wrong += m[i] != truth[i];
    CHECK(static_cast<double>(wrong) / static_cast<double>(x.size()) < 0.01);
    CHECK(otsu_threshold_nonzero(x) > 0.05);
  }
}

TEST_CASE("rotation basics") {
  CHECK(testing::error_code_of([] { Rotation::from_quaternion(0, 0, 0, 0); }) == ErrorCode::InvalidArgument);
  const Rotation r = Rotation::from_quaternion(1, 2, 3, 4);
  CHECK(std::abs(r.quaternion().norm() - 1.0) < 1e-9);
  const Eigen::Matrix3d id = (r * r.inverse()).matrix();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(std::abs(id(i, j) - (i == j ? 1.0 : 0.0)) < 1e-9);
}

TEST_CASE("uniform rotations") {
  SeedStream a(42), b(42);
  CHECK(sample_uniform_rotation(a).matrix() == sample_uniform_rotation(b).matrix());

  const int n = 100000;
  SeedStream s(7);
  Eigen::Vector3d mean = Eigen::Vector3d::Zero();
  const int bins = 20;
  std::vector<double> hist(bins, 0.0);
  for (int i = 0; i < n; ++i) {
    const Rotation r = sample_uniform_rotation(s);
    mean += r.apply(Eigen::Vector3d(0, 0, 1));
    const double th = r.angle();
    hist[std::min(bins - 1, static_cast<int>(th / std::numbers::pi * bins))] += 1.0;
  }
  CHECK((mean / n).norm() < 0.02);

  auto cdf = [](double t) { return (t - std::sin(t)) / std::numbers::pi; };
  double chi2 = 0.0;
  for (int k = 0; k < bins; ++k) {
    const double e = n * (cdf(std::numbers::pi * (k + 1) / bins) - cdf(std::numbers::pi * k / bins));
    chi2 += (hist[k] - e) * (hist[k] - e) / e;
  }
  const boost::math::chi_squared dist(bins - 1);
  CHECK(boost::math::cdf(boost::math::complement(dist, chi2)) > 0.01);
}

TEST_CASE("rotate_mask") {
  SUBCASE("identity") {
    const Volume m = testing::random_mask(12, 0.3, 5);
    CHECK(rotate_mask(m, Rotation::identity()).bit_equal(m));
  }
  SUBCASE("non-cubic") {
    CHECK(testing::error_code_of([] { rotate_mask(Volume({2, 3, 4}), Rotation::identity()); }) ==
          ErrorCode::NonCubicVolume);
  }
  SUBCASE("round trip of a ball") {
    const Volume m = testing::ball(32, 8.0);
    SeedStream s(9);
    for (int t = 0; t < 5; ++t) {
      const Rotation r = sample_uniform_rotation(s);
      const Volume fwd = rotate_mask(m, r);
      const Volume back = rotate_mask(fwd, r, true);
      std::size_t agree = 0;
      for (std::size_t i = 0; i < m.size(); ++i) agree += m[i] == back[i];
      CHECK(static_cast<double>(agree) / static_cast<double>(m.size()) >= 0.99);
      CHECK(fwd.is_mask());
      const double cin = static_cast<double>(m.count_nonzero());
      CHECK(std::abs(static_cast<double>(fwd.count_nonzero()) - cin) / cin < 0.05);
    }
  }
  SUBCASE("quarter turn about k0") {
    const std::size_t s = 9;
    const double c = 4.0;
    Volume m = Volume::cube(s);
    m(2, 3, 7) = 1.0f;
    const Rotation r = Rotation::from_axis_angle(Eigen::Vector3d(1, 0, 0), std::numbers::pi / 2);
    const Volume out = rotate_mask(m, r);
    // (d0, d1, d2) -> (d0, -d2, d1)
    const double d0 = 2 - c, d1 = 3 - c, d2 = 7 - c;
    CHECK(out(static_cast<std::size_t>(d0 + c), static_cast<std::size_t>(-d2 + c), static_cast<std::size_t>(d1 + c)) ==
          1.0f);
    CHECK(out.count_nonzero() == 1);
  }
}

TEST_CASE("VOL1 io") {
  const auto dir = std::filesystem::temp_directory_path() / "deid_test_volume";
  std::filesystem::create_directories(dir);
  SeedStream s(1);
  Volume v({3, 5, 7});
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<float>(s.normal());
  write_volume(v, dir / "v.vol");
  CHECK(read_volume(dir / "v.vol").bit_equal(v));

  auto bytes = encode_volume(v);
  CHECK(bytes.size() == 20 + 4 * v.size());
  CHECK(std::memcmp(bytes.data(), "VOL1", 4) == 0);
  CHECK(bytes[8] == 3);
  CHECK(bytes[12] == 5);
  CHECK(bytes[16] == 7);

  auto offset_of = [](std::vector<std::uint8_t> b) -> long {
    try {
      decode_volume(b);
    } catch (const FormatError& e) {
      return static_cast<long>(e.offset());
    }
    return -1;
  };
  auto bad = bytes;
  bad[0] = 'X';
  CHECK(offset_of(bad) == 0);
  bad = bytes;
  bad[4] = 2;
  CHECK(offset_of(bad) == 4);
  bad = bytes;
  bad[6] = 1;
  CHECK(offset_of(bad) == 6);

  // 4^3 header with a 63-voxel payload
  const auto cube = encode_volume(Volume::cube(4, 1.0f));
  std::vector<std::uint8_t> trunc(cube.begin(), cube.end() - 4);
  CHECK(offset_of(trunc) == static_cast<long>(trunc.size()));
  std::vector<std::uint8_t> header(cube.begin(), cube.begin() + 10);
  CHECK(offset_of(header) == 10);
  bad = cube;
  bad[8] = bad[9] = bad[10] = bad[11] = 0;
  CHECK(offset_of(bad) == 8);
  bad = cube;
  bad.push_back(0);
  CHECK(offset_of(bad) == static_cast<long>(cube.size()));

  Volume nan = Volume::cube(2);
  nan[3] = NAN;
  CHECK(testing::error_code_of([&] { encode_volume(nan); }) == ErrorCode::InvalidArgument);
  std::filesystem::remove_all(dir);
}

TEST_CASE("seeded helpers") {
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
  CHECK(derive_seed(1, 2) != derive_seed(2, 1));
  double acc = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double u = uniform_at(5, i);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    acc += u;
  }
  CHECK(std::abs(acc / 10000 - 0.5) < 0.02);
}
