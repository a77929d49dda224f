#include "deid/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "deid/error.hpp"

namespace deid {

namespace {

constexpr float kSoftTissue = 0.85f;
constexpr float kBrainTissue = 0.6f;
constexpr float kFluid = 0.35f;
constexpr float kMuscle = 0.6f;

// Band-limited field in [-1, 1]: mean of four seeded plane waves.
class SmoothField {
 public:
  SmoothField(Seed seed, std::size_t side, int max_freq) {
    SeedStream s(seed);
    const double base = 2.0 * std::numbers::pi / static_cast<double>(side);
    const auto span = static_cast<std::uint64_t>(2 * max_freq + 1);
    for (auto& w : waves_) {
      do {
        for (int a = 0; a < 3; ++a) w[a] = (static_cast<double>(s.below(span)) - max_freq) * base;
      } while (w[0] == 0.0 && w[1] == 0.0 && w[2] == 0.0);
      w[3] = 2.0 * std::numbers::pi * s.uniform();
    }
  }

  double operator()(double k0, double k1, double k2) const {
    double acc = 0.0;
    for (const auto& w : waves_) acc += std::cos(w[0] * k0 + w[1] * k1 + w[2] * k2 + w[3]);
    return acc / static_cast<double>(waves_.size());
  }

 private:
  std::array<std::array<double, 4>, 4> waves_{};
};

struct Dent {
  std::array<double, 3> center;  // on the unit sphere
  std::array<double, 3> spread;  // per-axis footprint radius
  double depth;                  // radial depth in unit-sphere units
  bool eye = false;
};

std::array<double, 3> unit(double a, double b, double c) {
  const double n = std::sqrt(a * a + b * b + c * c);
  return {a / n, b / n, c / n};
}

std::vector<Dent> face_dents(const Identity& id) {
  std::vector<Dent> dents;
  const double ny = id.nose_position;
  // eye sockets
  for (double side : {-1.0, 1.0}) {
    dents.push_back({unit(0.28 + 0.3 * ny, 0.9, side * id.eye_spacing), {id.eye_size, 1.0, id.eye_size}, 0.14, true});
  }
  // cheeks flank the nose ridge
  const double cheek = id.nose_size + 0.13;
  for (double side : {-1.0, 1.0}) {
    dents.push_back({unit(-0.08 + ny, 0.92, side * cheek), {0.2, 1.0, 0.11}, 0.09});
  }
  dents.push_back({unit(0.62, 0.78, 0.0), {0.14, 1.0, 0.36}, id.brow_depth});
  dents.push_back({unit(-0.46 + 0.5 * ny, 0.86, 0.0), {0.05, 1.0, id.mouth_width}, 0.07});
  for (double side : {-1.0, 1.0}) {
    dents.push_back({unit(-0.62, 0.45, side * id.jaw_width), {0.16, 0.3, 0.16}, 0.1});
  }
  return dents;
}

void check_range(double v, double lo, double hi, const char* name) {
  if (!(v >= lo && v <= hi)) {
    throw Error(ErrorCode::InvalidPhantomParams, std::string(name) + " = " + std::to_string(v) + " outside [" +
                                                     std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

}  // namespace

std::array<double, 3> default_head_axes(std::size_t side) {
  const auto s = static_cast<double>(side);
  return {0.31 * s, 0.32 * s, 0.27 * s};
}

void validate_identity(const Identity& id, std::size_t side) {
  const auto s = static_cast<double>(side);
  for (double a : id.head_axes) check_range(a, s / 5.0, s / 3.0, "head semi-axis");
  check_range(id.nose_size, 0.06, 0.2, "nose_size");
  check_range(id.nose_position, -0.12, 0.12, "nose_position");
  check_range(id.brow_depth, 0.02, 0.16, "brow_depth");
  check_range(id.jaw_width, 0.45, 0.75, "jaw_width");
  check_range(id.eye_spacing, 0.26, 0.42, "eye_spacing");
  check_range(id.eye_size, 0.12, 0.2, "eye_size");
  check_range(id.mouth_width, 0.14, 0.3, "mouth_width");
}

void PhantomParams::validate() const {
  if (side < 16) throw Error(ErrorCode::InvalidPhantomParams, "side must be at least 16");
  check_range(brain_scale, 0.4, 0.7, "brain_scale");
  check_range(csf_rim, 0.0, 0.15, "csf_rim");
  check_range(ventricle_scale, 0.0, 0.4, "ventricle_scale");
  if (identity) validate_identity(*identity, side);
}

Identity random_identity(Seed seed, std::size_t side, bool vary_head_size) {
  SeedStream s(seed);
  auto between = [&](double lo, double hi) { return lo + (hi - lo) * s.uniform(); };
  Identity id;
  id.head_axes = default_head_axes(side);
  if (vary_head_size) {
    const auto sd = static_cast<double>(side);
    for (auto& a : id.head_axes) a = std::clamp(a * between(0.86, 1.06), sd / 5.0, sd / 3.0);
  }
  id.nose_size = between(0.06, 0.2);
  id.nose_position = between(-0.12, 0.12);
  id.brow_depth = between(0.02, 0.16);
  id.jaw_width = between(0.45, 0.75);
  id.eye_spacing = between(0.26, 0.42);
  id.eye_size = between(0.12, 0.2);
  id.mouth_width = between(0.14, 0.3);
  id.texture_seed = s.next();
  return id;
}

Phantom generate_phantom(Seed seed, const PhantomParams& params) {
  params.validate();
  const std::size_t side = params.side;
  Phantom ph;
  ph.subject_id = seed;
  ph.identity = params.identity ? *params.identity : random_identity(derive_seed(seed, 1), side, params.vary_head_size);
  validate_identity(ph.identity, side);
  const Identity& id = ph.identity;

  const std::vector<Dent> dents = face_dents(id);
  const SmoothField tissue(derive_seed(id.texture_seed, 1), side, 2);
  const SmoothField face(derive_seed(id.texture_seed, 2), side, 5);
  const SmoothField cortex(derive_seed(seed, 3), side, 3);
  SeedStream noise(derive_seed(seed, 2));

  const double c = (static_cast<double>(side) - 1.0) / 2.0;
  const auto& a = id.head_axes;
  const double bs = params.brain_scale;
  const double vs = params.ventricle_scale;

  ph.scan = Volume::cube(side);
  ph.brain = Volume::cube(side);
  for (std::size_t k0 = 0; k0 < side; ++k0) {
    for (std::size_t k1 = 0; k1 < side; ++k1) {
      for (std::size_t k2 = 0; k2 < side; ++k2) {
        const double f0 = static_cast<double>(k0), f1 = static_cast<double>(k1), f2 = static_cast<double>(k2);
        const double p0 = (f0 - c) / a[0], p1 = (f1 - c) / a[1], p2 = (f2 - c) / a[2];
        const double r = std::sqrt(p0 * p0 + p1 * p1 + p2 * p2);
        const std::size_t idx = ph.scan.index(k0, k1, k2);
        // Background draw happens for every voxel so the noise stream does not depend on shape.
        const auto bg = static_cast<float>(std::abs(0.03 + 0.01 * noise.normal()));
        if (r > 1.0) {
          ph.scan[idx] = bg;
          continue;
        }

        const double q = r / bs;  // brain-relative radius
        if (q <= 1.0) {
          ph.brain[idx] = 1.0f;
          const double v0 = p0 / (bs * vs * 0.8), v1 = p1 / (bs * vs * 1.3), v2m = std::abs(p2) / (bs * vs * 0.5);
          const double v2 = v2m - 1.1;
          if (v0 * v0 + v1 * v1 + v2 * v2 <= 1.0) {
            ph.scan[idx] = kFluid;
          } else {
            ph.scan[idx] = static_cast<float>(kBrainTissue + 0.04 * cortex(f0, f1, f2));
          }
          continue;
        }
        if (q <= 1.0 + params.csf_rim) {
          ph.scan[idx] = kFluid;
          continue;
        }

        const double u0 = p0 / r, u1 = p1 / r, u2 = p2 / r;
        double carve = 0.0;
        bool eye = false;
        for (const Dent& d : dents) {
          const double w = std::pow((u0 - d.center[0]) / d.spread[0], 2) + std::pow((u1 - d.center[1]) / d.spread[1], 2) +
                           std::pow((u2 - d.center[2]) / d.spread[2], 2);
          if (w >= 1.0) continue;
          const double h = d.depth * (1.0 - w);
          if (h > carve) {
            carve = h;
            eye = d.eye;
          }
        }
        if (r > 1.0 - carve) {
          ph.scan[idx] = bg;
          continue;
        }
        if (eye && r > 1.0 - carve - 0.08) {
          ph.scan[idx] = kFluid;
          continue;
        }
        if (params.muscle && std::abs(u2) > 0.8 && u0 > 0.05 && u0 < 0.5 && r > 0.8 && r < 0.9) {
          ph.scan[idx] = kMuscle;
          continue;
        }
        double v = kSoftTissue + 0.05 * tissue(f0, f1, f2);
        if (u1 > 0.4) v += 0.04 * face(f0, f1, f2);
        ph.scan[idx] = static_cast<float>(v);
      }
    }
  }
  return ph;
}

}  // namespace deid
