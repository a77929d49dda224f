#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "deid/volume.hpp"

namespace deid {

enum class SurfaceSampling { Bernoulli, Threshold };

struct SurfaceParams {
  int rotations = 64;        // K
  double delta = 0.2;        // binarization threshold
  Seed seed = 0;
  std::size_t point_cap = 10000;
  SurfaceSampling sampling = SurfaceSampling::Bernoulli;
  double sample_threshold = 0.5;  // used by SurfaceSampling::Threshold

  // Throws InvalidArgument unless K >= 1, point_cap >= 4 and delta finite.
  void validate() const;
};

// Ray entry side: rays travel along `axis` and enter from the face on the
// `direction` side (+1 enters at index S-1, -1 enters at index 0).
struct AxisDirection {
  int axis = 0;
  int direction = 1;

  friend bool operator==(const AxisDirection&, const AxisDirection&) = default;
};

// All six (axis, direction) combinations.
std::span<const AxisDirection> all_axis_directions();

// Distance of voxel k from the entry face of (axis, direction).
std::size_t zeta(AxisDirection ad, const Point3& k, std::size_t side);

// First set voxel per grid line parallel to ad.axis, seen from ad.direction.
Volume intersection_map(const Volume& mask, AxisDirection ad);

// Mean of the six intersection maps; values in {0, 1/6, ..., 1}.
Volume directional_average(const Volume& mask);

// Number of axis directions (0..6) from which each voxel is the first hit.
std::vector<std::uint8_t> first_hit_counts(const Volume& mask);

// Rotations R_1..R_K drawn for params.seed, one derived sub-seed per index.
std::vector<Rotation> surface_rotations(const SurfaceParams& params);

// Z = 1/K sum_i Rot(directional_average(Rot(1[x >= delta]; R_i)); R_i^-1).
Volume surface_representation(const Volume& x, const SurfaceParams& params);
// Same with caller-provided rotations (K = rotations.size()).
Volume surface_representation(const Volume& x, double delta, std::span<const Rotation> rotations);

// Voxel-wise Bernoulli draw from z (or thresholding, per `sampling`), then a
// uniform subset of at most `cap` points. Throws EmptySurface when nothing
// can be drawn.
std::vector<Point3> sample_surface_points(const Volume& z, Seed seed, std::size_t cap,
                                          SurfaceSampling sampling = SurfaceSampling::Bernoulli,
                                          double threshold = 0.5);

}  // namespace deid
