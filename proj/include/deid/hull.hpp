#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "deid/volume.hpp"

namespace deid {

// Convex hull boundary: vertices plus outward-oriented triangles.
struct TriMesh {
  std::vector<Point3> vertices;
  std::vector<std::array<std::uint32_t, 3>> triangles;
  std::array<double, 3> centroid{};

  // Checks index range, non-degenerate triangles, outward orientation and
  // convexity (every vertex within 1e-6 * side of the back of every plane).
  bool is_valid(double side) const;
};

// Chan's algorithm: sub-hulls over groups of m points, gift wrapping over the
// sub-hulls with facet budget 2m - 4, m = 2^(2^t) until the wrap completes.
// Predicates are exact on integer coordinates. Coplanar points are merged
// into polygonal facets, then fan-triangulated, so the vertex set is exactly
// the set of extreme points.
// Throws TooFewPoints for < 4 points and DegenerateInput when all points are
// coplanar.
TriMesh convex_hull(std::span<const Point3> points);

// Exhaustive oracle for small inputs (4 <= n <= 60): enumerates every point
// triple, keeps the supporting planes and returns the points that are corners
// of some supporting face. Sorted, deduplicated.
std::vector<Point3> brute_force_hull(std::span<const Point3> points);

// Carves the hull out of an all-ones S^3 volume: each selected triangle
// zeroes the voxels whose center lies strictly on the outward side of its
// plane (tolerance 1e-6 * S). n_triangles = nullopt selects all triangles,
// otherwise a uniform sample without replacement. Throws InvalidCount for
// n_triangles <= 0.
Volume voxelize_hull(const TriMesh& mesh, std::size_t side, std::optional<int> n_triangles, Seed seed);

// ASCII OFF: "OFF", counts, vertex lines, "3 i j k" face lines.
void write_off(const TriMesh& mesh, std::ostream& out);

}  // namespace deid
