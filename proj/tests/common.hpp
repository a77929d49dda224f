#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "deid/error.hpp"
#include "deid/surface.hpp"
#include "deid/volume.hpp"

namespace testing {

inline deid::Volume ball(std::size_t side, double radius, float value = 1.0f) {
  const double c = (static_cast<double>(side) - 1.0) / 2.0;
  deid::Volume v = deid::Volume::cube(side);
  for (std::size_t i = 0; i < side; ++i)
    for (std::size_t j = 0; j < side; ++j)
      for (std::size_t k = 0; k < side; ++k) {
        const double d = std::hypot(i - c, j - c, k - c);
        if (d <= radius) v(i, j, k) = value;
      }
  return v;
}

inline deid::Volume box(std::size_t side, std::size_t lo, std::size_t hi) {
  deid::Volume v = deid::Volume::cube(side);
  for (std::size_t i = lo; i < hi; ++i)
    for (std::size_t j = lo; j < hi; ++j)
      for (std::size_t k = lo; k < hi; ++k) v(i, j, k) = 1.0f;
  return v;
}

inline deid::Volume random_mask(std::size_t side, double p, deid::Seed seed) {
  deid::Volume v = deid::Volume::cube(side);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = deid::uniform_at(seed, i) < p ? 1.0f : 0.0f;
  return v;
}

// Step-by-step ray march from the entry face; marks the first set voxel.
inline deid::Volume march_first_hits(const deid::Volume& m, deid::AxisDirection ad) {
  const long s = static_cast<long>(m.side());
  deid::Volume out = deid::Volume::cube(m.side());
  for (long u = 0; u < s; ++u) {
    for (long w = 0; w < s; ++w) {
      long pos = ad.direction > 0 ? s - 1 : 0;
      const long step = ad.direction > 0 ? -1 : 1;
      for (long n = 0; n < s; ++n, pos += step) {
        long k[3];
        k[ad.axis] = pos;
        k[(ad.axis + 1) % 3] = u;
        k[(ad.axis + 2) % 3] = w;
        if (m(k[0], k[1], k[2]) == 1.0f) {
          out(k[0], k[1], k[2]) = 1.0f;
          break;
        }
      }
    }
  }
  return out;
}

template <class F>
deid::ErrorCode error_code_of(F&& f) {
  try {
    f();
  } catch (const deid::Error& e) {
    return e.code();
  }
  return static_cast<deid::ErrorCode>(-1);
}

}  // namespace testing
