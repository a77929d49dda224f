#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "deid/hull.hpp"
#include "deid/surface.hpp"
#include "deid/volume.hpp"

namespace deid {

// gamma(x) = (c(x), b(x), b(x) o x).
struct PrivacyTransform {
  Volume hull;               // c(x)
  Volume brain;              // b(x)
  Volume brain_intensities;  // b(x) o x

  std::size_t side() const { return hull.side(); }

  // Same cubic dims, binary masks, zero intensities off the brain and
  // brain within hull. Throws DimMismatch / InvalidArgument / BrainOutsideHull.
  void validate() const;
  bool bit_equal(const PrivacyTransform& other) const;
};

struct PrivacyTransformParams {
  SurfaceParams surface;
  std::optional<int> hull_triangles = 100;  // nullopt: clip with every hull triangle
  int max_retries = 3;
};

// Surface representation -> sampled points -> Chan hull -> half-space
// voxelization, then (c, b, b o x). Sampling failures are retried with fresh
// sub-seeds up to max_retries times before TransformFailed.
PrivacyTransform build_privacy_transform(const Volume& x, const Volume& brain,
                                         const PrivacyTransformParams& params);

// Each factor^3 block becomes 1 with probability equal to its mean; the
// draw for output voxel j is uniform_at(seed, j).
Volume probabilistic_downsample(const Volume& mask, std::size_t factor, Seed seed);

// Block mean over factor^3 blocks.
Volume average_downsample(const Volume& x, std::size_t factor);

// Levels k = 1..N_B at sides s * 2^(k-1); levels.back() is the input.
struct Pyramid {
  std::vector<PrivacyTransform> levels;

  std::size_t level_count() const noexcept { return levels.size(); }
};

// N_B = log2(S / s) + 1.
std::size_t pyramid_level_count(std::size_t full_side, std::size_t min_side);

// Masks go down by repeated factor-2 probabilistic steps, intensities by
// factor-2 averaging. Throws InvalidScale unless S and s are powers of two
// with s <= S.
Pyramid build_pyramid(const PrivacyTransform& gamma, std::size_t min_side, Seed seed);

// <prefix>.hull.vol, <prefix>.brain.vol, <prefix>.brainint.vol
void write_privacy_transform(const PrivacyTransform& gamma, const std::string& prefix);
PrivacyTransform read_privacy_transform(const std::string& prefix);
// <prefix>.level<k>.{hull,brain,brainint}.vol for k = 1..N_B
void write_pyramid(const Pyramid& pyramid, const std::string& prefix);

}  // namespace deid
