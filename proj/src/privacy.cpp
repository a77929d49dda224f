#include "deid/privacy.hpp"

#include <bit>

#include "deid/error.hpp"

namespace deid {

namespace {

constexpr std::uint64_t kPointsTag = 0x70747300ULL;
constexpr std::uint64_t kTrianglesTag = 0x74726900ULL;

template <class F>
Volume block_reduce(const Volume& x, std::size_t factor, F&& emit) {
  if (factor == 0) throw Error(ErrorCode::InvalidArgument, "factor must be positive");
  const Dims& d = x.dims();
  if (d.s0 % factor || d.s1 % factor || d.s2 % factor) {
    throw Error(ErrorCode::DimMismatch, "dims " + to_string(d) + " not divisible by " + std::to_string(factor));
  }
  const Dims od{d.s0 / factor, d.s1 / factor, d.s2 / factor};
  Volume out(od);
  const double inv = 1.0 / static_cast<double>(factor * factor * factor);
  for (std::size_t o0 = 0; o0 < od.s0; ++o0) {
    for (std::size_t o1 = 0; o1 < od.s1; ++o1) {
      for (std::size_t o2 = 0; o2 < od.s2; ++o2) {
        double acc = 0.0;
        for (std::size_t i = 0; i < factor; ++i) {
          for (std::size_t j = 0; j < factor; ++j) {
            for (std::size_t k = 0; k < factor; ++k) {
              acc += x(o0 * factor + i, o1 * factor + j, o2 * factor + k);
            }
          }
        }
        const std::size_t idx = out.index(o0, o1, o2);
        out[idx] = emit(acc * inv, idx);
      }
    }
  }
  return out;
}

}  // namespace

void PrivacyTransform::validate() const {
  require_cubic(hull, "privacy transform hull");
  require_same_dims(hull, brain, "privacy transform brain");
  require_same_dims(hull, brain_intensities, "privacy transform brain intensities");
  if (!hull.is_mask() || !brain.is_mask()) {
    throw Error(ErrorCode::InvalidArgument, "hull and brain channels must be binary");
  }
  for (std::size_t i = 0; i < hull.size(); ++i) {
    if (brain[i] == 1.0f && hull[i] != 1.0f) {
      throw Error(ErrorCode::BrainOutsideHull, "brain voxel " + std::to_string(i) + " lies outside the hull");
    }
    if (brain[i] == 0.0f && brain_intensities[i] != 0.0f) {
      throw Error(ErrorCode::InvalidArgument, "brain intensities nonzero off the brain mask");
    }
  }
}

bool PrivacyTransform::bit_equal(const PrivacyTransform& other) const {
  return hull.bit_equal(other.hull) && brain.bit_equal(other.brain) &&
         brain_intensities.bit_equal(other.brain_intensities);
}

PrivacyTransform build_privacy_transform(const Volume& x, const Volume& brain,
                                         const PrivacyTransformParams& params) {
  require_cubic(x, "build_privacy_transform");
  require_same_dims(x, brain, "build_privacy_transform");
  if (!brain.is_mask()) throw Error(ErrorCode::InvalidArgument, "brain mask must be binary");
  if (brain.count_nonzero() == 0) throw Error(ErrorCode::EmptyMask, "brain mask is empty");
  params.surface.validate();
  if (params.max_retries < 0) throw Error(ErrorCode::InvalidArgument, "max_retries must be >= 0");

  const std::size_t side = x.side();
  const Volume z = surface_representation(x, params.surface);

  std::optional<Volume> hull;
  std::string last_error;
  for (int attempt = 0; attempt <= params.max_retries && !hull; ++attempt) {
    const auto a = static_cast<std::uint64_t>(attempt);
    try {
      const auto points = sample_surface_points(z, derive_seed(params.surface.seed, kPointsTag + a),
                                                params.surface.point_cap, params.surface.sampling,
                                                params.surface.sample_threshold);
      const TriMesh mesh = convex_hull(points);
      hull = voxelize_hull(mesh, side, params.hull_triangles, derive_seed(params.surface.seed, kTrianglesTag + a));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EmptySurface && e.code() != ErrorCode::DegenerateInput &&
          e.code() != ErrorCode::TooFewPoints) {
        throw;
      }
      last_error = e.what();
    }
  }
  if (!hull) throw Error(ErrorCode::TransformFailed, "hull construction failed: " + last_error);

  PrivacyTransform gamma{std::move(*hull), brain, Volume(x.dims())};
  for (std::size_t i = 0; i < x.size(); ++i) {
    gamma.brain_intensities[i] = brain[i] == 1.0f ? x[i] : 0.0f;
  }
  gamma.validate();
  return gamma;
}

Volume probabilistic_downsample(const Volume& mask, std::size_t factor, Seed seed) {
  return block_reduce(mask, factor, [seed](double mean, std::size_t idx) {
    return uniform_at(seed, idx) < mean ? 1.0f : 0.0f;
  });
}

Volume average_downsample(const Volume& x, std::size_t factor) {
  return block_reduce(x, factor, [](double mean, std::size_t) { return static_cast<float>(mean); });
}

std::size_t pyramid_level_count(std::size_t full_side, std::size_t min_side) {
  if (!std::has_single_bit(full_side) || !std::has_single_bit(min_side) || min_side > full_side) {
    throw Error(ErrorCode::InvalidScale, "S and s must be powers of two with s <= S (got S=" +
                                             std::to_string(full_side) + ", s=" + std::to_string(min_side) + ")");
  }
  return static_cast<std::size_t>(std::countr_zero(full_side) - std::countr_zero(min_side)) + 1;
}

Pyramid build_pyramid(const PrivacyTransform& gamma, std::size_t min_side, Seed seed) {
  const std::size_t levels = pyramid_level_count(gamma.side(), min_side);
  Pyramid pyr;
  pyr.levels.resize(levels);
  pyr.levels[levels - 1] = gamma;
  for (std::size_t k = levels - 1; k-- > 0;) {
    const PrivacyTransform& up = pyr.levels[k + 1];
    const Seed level_seed = derive_seed(seed, k + 1);
    pyr.levels[k] = PrivacyTransform{probabilistic_downsample(up.hull, 2, derive_seed(level_seed, 0)),
                                     probabilistic_downsample(up.brain, 2, derive_seed(level_seed, 1)),
                                     average_downsample(up.brain_intensities, 2)};
  }
  return pyr;
}

void write_privacy_transform(const PrivacyTransform& gamma, const std::string& prefix) {
  write_volume(gamma.hull, prefix + ".hull.vol");
  write_volume(gamma.brain, prefix + ".brain.vol");
  write_volume(gamma.brain_intensities, prefix + ".brainint.vol");
}

PrivacyTransform read_privacy_transform(const std::string& prefix) {
  PrivacyTransform gamma{read_volume(prefix + ".hull.vol"), read_volume(prefix + ".brain.vol"),
                         read_volume(prefix + ".brainint.vol")};
  gamma.validate();
  return gamma;
}

void write_pyramid(const Pyramid& pyramid, const std::string& prefix) {
  for (std::size_t k = 0; k < pyramid.levels.size(); ++k) {
    write_privacy_transform(pyramid.levels[k], prefix + ".level" + std::to_string(k + 1));
  }
}

}  // namespace deid
