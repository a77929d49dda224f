#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "deid/volume.hpp"

namespace deid {

// Frontal looks along -k1 at the face, Left along +k2, Right along -k2.
enum class View { Frontal, Left, Right };

std::string_view to_string(View v);
View parse_view(std::string_view name);

// W x W depth-shaded image, row-major. Frontal and side views index rows by
// k0; columns are k2 (frontal) or k1 (sides). Misses are exactly 0.
struct Rendering {
  std::size_t width = 0;
  View view = View::Frontal;
  std::vector<float> pixels;

  float at(std::size_t row, std::size_t col) const { return pixels[row * width + col]; }
};

// Orthographic ray cast: first voxel with x >= delta at depth d gives 1 - d/S.
Rendering render_face(const Volume& x, double delta, View view = View::Frontal);

// Euclidean distance between 4x block-averaged, zero-mean, unit-norm images.
// A constant image normalizes to all zeros. Throws DimMismatch for different
// sizes or views.
double match_distance(const Rendering& a, const Rendering& b);

// The normalized feature vector match_distance compares.
std::vector<double> match_features(const Rendering& r);
double feature_distance(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace deid
