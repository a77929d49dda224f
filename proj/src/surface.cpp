#include "deid/surface.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "deid/error.hpp"

namespace deid {

namespace {

constexpr std::array<AxisDirection, 6> kAxisDirections{{
    {0, -1}, {0, +1}, {1, -1}, {1, +1}, {2, -1}, {2, +1}}};

constexpr std::uint64_t kPointSubsetTag = 0xca9ca9ULL;

// Visits every line parallel to `axis`; f(base, stride) gets the flat index
// of the line's k_axis = 0 voxel and the flat stride along the axis.
template <class F>
void for_each_line(std::size_t s, int axis, F&& f) {
  const std::size_t stride = axis == 0 ? s * s : (axis == 1 ? s : 1);
  for (std::size_t u = 0; u < s; ++u) {
    for (std::size_t v = 0; v < s; ++v) {
      std::size_t base = 0;
      switch (axis) {
        case 0: base = u * s + v; break;
        case 1: base = u * s * s + v; break;
        default: base = (u * s + v) * s; break;
      }
      f(base, stride);
    }
  }
}

}  // namespace

void SurfaceParams::validate() const {
  if (rotations < 1) throw Error(ErrorCode::InvalidArgument, "rotation count K must be >= 1");
  if (point_cap < 4) throw Error(ErrorCode::InvalidArgument, "point_cap must be >= 4");
  if (!std::isfinite(delta)) throw Error(ErrorCode::InvalidThreshold, "delta must be finite");
}

std::span<const AxisDirection> all_axis_directions() { return kAxisDirections; }

std::size_t zeta(AxisDirection ad, const Point3& k, std::size_t side) {
  if (ad.axis < 0 || ad.axis > 2 || (ad.direction != 1 && ad.direction != -1)) {
    throw Error(ErrorCode::InvalidArgument, "axis must be 0..2 and direction +-1");
  }
  for (int a = 0; a < 3; ++a) {
    if (k[a] < 0 || static_cast<std::size_t>(k[a]) >= side) {
      throw Error(ErrorCode::IndexOutOfRange, "voxel index outside [0, S)");
    }
  }
  const auto ka = static_cast<std::size_t>(k[ad.axis]);
  return ad.direction == 1 ? (side - 1) - ka : ka;
}

Volume intersection_map(const Volume& mask, AxisDirection ad) {
  require_cubic(mask, "intersection_map");
  const std::size_t s = mask.dims().s0;
  Volume out(mask.dims());
  auto src = mask.data();
  auto dst = out.data();
  for_each_line(s, ad.axis, [&](std::size_t base, std::size_t stride) {
    // Minimal zeta on the line: scan away from the entry face.
    for (std::size_t step = 0; step < s; ++step) {
      const std::size_t ka = ad.direction == 1 ? s - 1 - step : step;
      const std::size_t idx = base + ka * stride;
      if (src[idx] == 1.0f) {
        dst[idx] = 1.0f;
        break;
      }
    }
  });
  return out;
}

std::vector<std::uint8_t> first_hit_counts(const Volume& mask) {
  require_cubic(mask, "first_hit_counts");
  const std::size_t s = mask.dims().s0;
  std::vector<std::uint8_t> counts(mask.size(), 0);
  auto src = mask.data();
  for (int axis = 0; axis < 3; ++axis) {
    for_each_line(s, axis, [&](std::size_t base, std::size_t stride) {
      std::size_t lo = s, hi = 0;
      for (std::size_t ka = 0; ka < s; ++ka) {
        if (src[base + ka * stride] == 1.0f) {
          if (lo == s) lo = ka;
          hi = ka;
        }
      }
      if (lo == s) return;
      ++counts[base + lo * stride];  // entered from the -1 side
      ++counts[base + hi * stride];  // entered from the +1 side
    });
  }
  return counts;
}

Volume directional_average(const Volume& mask) {
  const auto counts = first_hit_counts(mask);
  Volume out(mask.dims());
  auto dst = out.data();
  for (std::size_t i = 0; i < counts.size(); ++i) dst[i] = static_cast<float>(counts[i]) / 6.0f;
  return out;
}

std::vector<Rotation> surface_rotations(const SurfaceParams& params) {
  params.validate();
  std::vector<Rotation> rotations;
  rotations.reserve(static_cast<std::size_t>(params.rotations));
  for (int i = 0; i < params.rotations; ++i) {
    SeedStream stream(derive_seed(params.seed, static_cast<std::uint64_t>(i)));
    rotations.push_back(sample_uniform_rotation(stream));
  }
  return rotations;
}

Volume surface_representation(const Volume& x, const SurfaceParams& params) {
  params.validate();
  const auto rotations = surface_rotations(params);
  return surface_representation(x, params.delta, rotations);
}

Volume surface_representation(const Volume& x, double delta, std::span<const Rotation> rotations) {
  require_cubic(x, "surface_representation");
  if (rotations.empty()) throw Error(ErrorCode::InvalidArgument, "need at least one rotation");
  const Volume mask = binarize(x, delta);
  const std::size_t n = x.size();

  // Hit counts are integers in 0..6 per rotation, so the accumulator is exact
  // and independent of the order in which rotations finish.
  std::vector<std::uint32_t> total(n, 0);
  if (mask.count_nonzero() > 0) {
    const auto k = static_cast<long>(rotations.size());
#pragma omp parallel
    {
      std::vector<std::uint32_t> local(n, 0);
#pragma omp for schedule(dynamic)
      for (long i = 0; i < k; ++i) {
        const Rotation& r = rotations[static_cast<std::size_t>(i)];
        const Volume rotated = rotate_mask(mask, r);
        const auto counts = first_hit_counts(rotated);
        Volume hits(mask.dims());
        auto h = hits.data();
        for (std::size_t j = 0; j < n; ++j) h[j] = static_cast<float>(counts[j]);
        const Volume back = rotate_mask(hits, r, /*inverse=*/true);
        auto b = back.data();
        for (std::size_t j = 0; j < n; ++j) local[j] += static_cast<std::uint32_t>(b[j]);
      }
#pragma omp critical
      for (std::size_t j = 0; j < n; ++j) total[j] += local[j];
    }
  }

  Volume z(x.dims());
  auto dst = z.data();
  const double denom = 6.0 * static_cast<double>(rotations.size());
  for (std::size_t j = 0; j < n; ++j) dst[j] = static_cast<float>(total[j] / denom);
  return z;
}

std::vector<Point3> sample_surface_points(const Volume& z, Seed seed, std::size_t cap,
                                          SurfaceSampling sampling, double threshold) {
  if (cap < 1) throw Error(ErrorCode::InvalidCount, "point cap must be positive");
  auto src = z.data();
  std::vector<std::size_t> picked;
  for (std::size_t i = 0; i < src.size(); ++i) {
    const double p = src[i];
    if (p <= 0.0) continue;
    const bool take = sampling == SurfaceSampling::Bernoulli ? uniform_at(seed, i) < p : p >= threshold;
    if (take) picked.push_back(i);
  }
  if (picked.empty()) throw Error(ErrorCode::EmptySurface, "no surface voxel was drawn");

  if (picked.size() > cap) {
    SeedStream stream(derive_seed(seed, kPointSubsetTag));
    // Partial Fisher-Yates: first `cap` entries become a uniform subset.
    for (std::size_t i = 0; i < cap; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(stream.below(picked.size() - i));
      std::swap(picked[i], picked[j]);
    }
    picked.resize(cap);
    std::sort(picked.begin(), picked.end());
  }

  std::vector<Point3> points;
  points.reserve(picked.size());
  for (std::size_t i : picked) points.push_back(z.coords(i));
  return points;
}

}  // namespace deid
