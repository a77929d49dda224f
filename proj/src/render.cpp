#include "deid/render.hpp"

#include <cmath>
#include <string>

#include "deid/error.hpp"

namespace deid {

namespace {

constexpr std::size_t kPool = 4;

}  // namespace

std::string_view to_string(View v) {
  switch (v) {
    case View::Frontal: return "frontal";
    case View::Left: return "left";
    case View::Right: return "right";
  }
  return "unknown";
}

View parse_view(std::string_view name) {
  for (View v : {View::Frontal, View::Left, View::Right}) {
    if (to_string(v) == name) return v;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown view '" + std::string(name) + "'");
}

Rendering render_face(const Volume& x, double delta, View view) {
  const std::size_t s = x.side();
  Rendering img{s, view, std::vector<float>(s * s, 0.0f)};
  const auto fs = static_cast<float>(s);
  for (std::size_t row = 0; row < s; ++row) {
    for (std::size_t col = 0; col < s; ++col) {
      for (std::size_t d = 0; d < s; ++d) {
        float v = 0.0f;
        switch (view) {
          case View::Frontal: v = x(row, s - 1 - d, col); break;
          case View::Left: v = x(row, col, d); break;
          case View::Right: v = x(row, col, s - 1 - d); break;
        }
        if (v >= delta) {
          img.pixels[row * s + col] = 1.0f - static_cast<float>(d) / fs;
          break;
        }
      }
    }
  }
  return img;
}

std::vector<double> match_features(const Rendering& r) {
  const std::size_t w = r.width / kPool;
  std::vector<double> f(w * w, 0.0);
  for (std::size_t row = 0; row < w * kPool; ++row) {
    for (std::size_t col = 0; col < w * kPool; ++col) {
      f[(row / kPool) * w + col / kPool] += r.at(row, col);
    }
  }
  double mean = 0.0;
  for (double& v : f) {
    v /= static_cast<double>(kPool * kPool);
    mean += v;
  }
  mean /= static_cast<double>(f.size());
  double norm = 0.0;
  for (double& v : f) {
    v -= mean;
    norm += v * v;
  }
  norm = std::sqrt(norm);
  for (double& v : f) v = norm > 1e-12 ? v / norm : 0.0;
  return f;
}

double feature_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimMismatch, "feature sizes differ");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(acc);
}

double match_distance(const Rendering& a, const Rendering& b) {
  if (a.width != b.width || a.view != b.view) {
    throw Error(ErrorCode::DimMismatch, "renderings differ in size or view");
  }
  return feature_distance(match_features(a), match_features(b));
}

}  // namespace deid
