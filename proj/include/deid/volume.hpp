#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Geometry>

#include "deid/random.hpp"

namespace deid {

struct Dims {
  std::size_t s0 = 0;
  std::size_t s1 = 0;
  std::size_t s2 = 0;

  std::size_t count() const noexcept { return s0 * s1 * s2; }
  bool is_cubic() const noexcept { return s0 == s1 && s1 == s2; }
  friend bool operator==(const Dims&, const Dims&) = default;
};

std::string to_string(const Dims& d);

// Integer voxel coordinate triple (k0, k1, k2).
struct Point3 {
  std::int32_t p0 = 0;
  std::int32_t p1 = 0;
  std::int32_t p2 = 0;

  std::int32_t operator[](int axis) const noexcept {
    return axis == 0 ? p0 : (axis == 1 ? p1 : p2);
  }
  friend auto operator<=>(const Point3&, const Point3&) = default;
};

// Dense S0 x S1 x S2 grid of float32, index order [k0][k1][k2] with k2
// fastest. Masks hold 0/1, probability maps hold values in [0, 1].
class Volume {
 public:
  Volume() = default;
  explicit Volume(Dims dims, float fill = 0.0f);
  Volume(Dims dims, std::vector<float> data);

  static Volume cube(std::size_t side, float fill = 0.0f) { return Volume({side, side, side}, fill); }

  const Dims& dims() const noexcept { return dims_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  bool is_cubic() const noexcept { return dims_.is_cubic(); }

  // Cube side length; throws NonCubicVolume otherwise.
  std::size_t side() const;

  std::size_t index(std::size_t k0, std::size_t k1, std::size_t k2) const noexcept {
    return (k0 * dims_.s1 + k1) * dims_.s2 + k2;
  }
  Point3 coords(std::size_t flat) const noexcept;

  float operator()(std::size_t k0, std::size_t k1, std::size_t k2) const noexcept {
    return data_[index(k0, k1, k2)];
  }
  float& operator()(std::size_t k0, std::size_t k1, std::size_t k2) noexcept {
    return data_[index(k0, k1, k2)];
  }
  float operator[](std::size_t flat) const noexcept { return data_[flat]; }
  float& operator[](std::size_t flat) noexcept { return data_[flat]; }

  std::span<const float> data() const noexcept { return data_; }
  std::span<float> data() noexcept { return data_; }

  bool is_mask() const noexcept;
  bool is_probability() const noexcept;
  std::size_t count_nonzero() const noexcept;
  double sum() const noexcept;
  float max_value() const noexcept;

  // Bit-level equality of dims and payload.
  bool bit_equal(const Volume& other) const noexcept;

 private:
  Dims dims_{};
  std::vector<float> data_;
};

void require_same_dims(const Volume& a, const Volume& b, const char* what);
void require_cubic(const Volume& v, const char* what);

// 1[x >= delta] per voxel.
Volume binarize(const Volume& x, double delta);

// 256-bin Otsu threshold over all voxels. Throws DegenerateHistogram for
// fewer than two distinct values.
double otsu_threshold(const Volume& x);
// Same, restricted to voxels with nonzero value.
double otsu_threshold_nonzero(const Volume& x);
double otsu_threshold(std::span<const float> values);

// Unit quaternion rotation about the volume center.
class Rotation {
 public:
  Rotation() : q_(Eigen::Quaterniond::Identity()) {}
  // Normalizes (w, x, y, z); throws InvalidArgument for a zero quaternion.
  static Rotation from_quaternion(double w, double x, double y, double z);
  static Rotation from_axis_angle(const Eigen::Vector3d& axis, double angle);
  static Rotation identity() { return Rotation(); }

  Rotation inverse() const { return Rotation(q_.conjugate()); }
  Rotation operator*(const Rotation& rhs) const { return Rotation((q_ * rhs.q_).normalized()); }

  Eigen::Matrix3d matrix() const { return q_.toRotationMatrix(); }
  Eigen::Vector3d apply(const Eigen::Vector3d& v) const { return q_ * v; }
  // Rotation angle in [0, pi].
  double angle() const;
  const Eigen::Quaterniond& quaternion() const noexcept { return q_; }

 private:
  explicit Rotation(const Eigen::Quaterniond& q) : q_(q) {}
  Eigen::Quaterniond q_;
};

// Uniform draw from SO(3): normalized 4D Gaussian. Advances the stream.
Rotation sample_uniform_rotation(SeedStream& stream);

// Nearest-neighbor resampling under rotation about ((S-1)/2, (S-1)/2, (S-1)/2).
// Output voxel k takes the value at round(R^-1 (k - c) + c), or 0 when that
// source lies outside the grid; `inverse` applies R^-1 instead of R.
// Works for any cubic volume; masks stay binary.
Volume rotate_mask(const Volume& m, const Rotation& r, bool inverse = false);

// VOL1 file format.
std::vector<std::uint8_t> encode_volume(const Volume& v);
Volume decode_volume(std::span<const std::uint8_t> bytes);
void write_volume(const Volume& v, const std::filesystem::path& path);
Volume read_volume(const std::filesystem::path& path);

}  // namespace deid
