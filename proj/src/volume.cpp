#include "deid/volume.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>

#include "deid/error.hpp"

namespace deid {

std::string to_string(const Dims& d) {
  return std::to_string(d.s0) + "x" + std::to_string(d.s1) + "x" + std::to_string(d.s2);
}

Volume::Volume(Dims dims, float fill) : dims_(dims), data_(dims.count(), fill) {}

Volume::Volume(Dims dims, std::vector<float> data) : dims_(dims), data_(std::move(data)) {
  if (data_.size() != dims_.count()) {
    throw Error(ErrorCode::DimMismatch, "payload of " + std::to_string(data_.size()) +
                                            " voxels does not match dims " + to_string(dims_));
  }
}

std::size_t Volume::side() const {
  require_cubic(*this, "Volume::side");
  return dims_.s0;
}

Point3 Volume::coords(std::size_t flat) const noexcept {
  const std::size_t k2 = flat % dims_.s2;
  const std::size_t rest = flat / dims_.s2;
  return {static_cast<std::int32_t>(rest / dims_.s1), static_cast<std::int32_t>(rest % dims_.s1),
          static_cast<std::int32_t>(k2)};
}

bool Volume::is_mask() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](float v) { return v == 0.0f || v == 1.0f; });
}

bool Volume::is_probability() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](float v) { return v >= 0.0f && v <= 1.0f; });
}

std::size_t Volume::count_nonzero() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(data_.begin(), data_.end(), [](float v) { return v != 0.0f; }));
}

double Volume::sum() const noexcept {
  return std::accumulate(data_.begin(), data_.end(), 0.0,
                         [](double acc, float v) { return acc + static_cast<double>(v); });
}

float Volume::max_value() const noexcept {
  if (data_.empty()) return 0.0f;
  return *std::max_element(data_.begin(), data_.end());
}

bool Volume::bit_equal(const Volume& other) const noexcept {
  return dims_ == other.dims_ &&
         std::memcmp(data_.data(), other.data_.data(), data_.size() * sizeof(float)) == 0;
}

void require_same_dims(const Volume& a, const Volume& b, const char* what) {
  if (!(a.dims() == b.dims())) {
    throw Error(ErrorCode::DimMismatch, std::string(what) + ": " + to_string(a.dims()) + " vs " +
                                            to_string(b.dims()));
  }
}

void require_cubic(const Volume& v, const char* what) {
  if (!v.is_cubic() || v.empty()) {
    throw Error(ErrorCode::NonCubicVolume, std::string(what) + ": dims " + to_string(v.dims()));
  }
}

Volume binarize(const Volume& x, double delta) {
  if (!std::isfinite(delta)) {
    throw Error(ErrorCode::InvalidThreshold, "binarization threshold must be finite");
  }
  Volume out(x.dims());
  auto src = x.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = static_cast<double>(src[i]) >= delta ? 1.0f : 0.0f;
  }
  return out;
}

double otsu_threshold(std::span<const float> values) {
  constexpr int kBins = 256;
  float lo = std::numeric_limits<float>::infinity();
  float hi = -std::numeric_limits<float>::infinity();
  for (float v : values) {
    if (!std::isfinite(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi > lo)) {
    throw Error(ErrorCode::DegenerateHistogram, "need at least two distinct finite values");
  }
  const double width = (static_cast<double>(hi) - lo) / kBins;
  std::array<double, kBins> hist{};
  double total = 0.0;
  for (float v : values) {
    if (!std::isfinite(v)) continue;
    auto bin = static_cast<int>((static_cast<double>(v) - lo) / width);
    hist[static_cast<std::size_t>(std::clamp(bin, 0, kBins - 1))] += 1.0;
    total += 1.0;
  }

  double sum_all = 0.0;
  for (int b = 0; b < kBins; ++b) sum_all += b * hist[b];

  // Split t puts bins [0, t) in the background class.
  std::array<double, kBins> between{};
  double w0 = 0.0, sum0 = 0.0, best = -1.0;
  for (int t = 1; t < kBins; ++t) {
    w0 += hist[t - 1];
    sum0 += (t - 1) * hist[t - 1];
    const double w1 = total - w0;
    if (w0 == 0.0 || w1 == 0.0) continue;
    const double m0 = sum0 / w0;
    const double m1 = (sum_all - sum0) / w1;
    between[t] = w0 * w1 * (m0 - m1) * (m0 - m1);
    best = std::max(best, between[t]);
  }
  // Splits inside an empty gap all score the same; take the middle of the
  // contiguous run of maximizers.
  int first = -1, last = -1;
  for (int t = 1; t < kBins; ++t) {
    if (between[t] >= best * (1.0 - 1e-12)) {
      if (first < 0) first = t;
      last = t;
    } else if (first >= 0) {
      break;
    }
  }
  const int t = (first + last) / 2;
  return lo + t * width;
}

double otsu_threshold(const Volume& x) { return otsu_threshold(x.data()); }

double otsu_threshold_nonzero(const Volume& x) {
  std::vector<float> nz;
  nz.reserve(x.size());
  for (float v : x.data()) {
    if (v != 0.0f) nz.push_back(v);
  }
  return otsu_threshold(std::span<const float>(nz));
}

Rotation Rotation::from_quaternion(double w, double x, double y, double z) {
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorCode::InvalidArgument, "quaternion must be finite and nonzero");
  }
  return Rotation(Eigen::Quaterniond(w / n, x / n, y / n, z / n));
}

Rotation Rotation::from_axis_angle(const Eigen::Vector3d& axis, double angle) {
  if (!(axis.norm() > 0.0)) throw Error(ErrorCode::InvalidArgument, "rotation axis is zero");
  return Rotation(Eigen::Quaterniond(Eigen::AngleAxisd(angle, axis.normalized())));
}

double Rotation::angle() const {
  return 2.0 * std::acos(std::clamp(std::abs(q_.w()), 0.0, 1.0));
}

Rotation sample_uniform_rotation(SeedStream& stream) {
  for (;;) {
    const double w = stream.normal(), x = stream.normal(), y = stream.normal(),
                 z = stream.normal();
    if (w * w + x * x + y * y + z * z > 1e-12) return Rotation::from_quaternion(w, x, y, z);
  }
}

Volume rotate_mask(const Volume& m, const Rotation& r, bool inverse) {
  require_cubic(m, "rotate_mask");
  const std::size_t s = m.dims().s0;
  const auto si = static_cast<long>(s);
  const double c = (static_cast<double>(s) - 1.0) / 2.0;
  // Pull: source = M (k - c) + c with M = R^-1 for the forward rotation.
  const Eigen::Matrix3d rot = inverse ? r.matrix() : Eigen::Matrix3d(r.matrix().transpose());

  Volume out(m.dims());
  auto src = m.data();
  auto dst = out.data();
  for (std::size_t k0 = 0; k0 < s; ++k0) {
    const double d0 = static_cast<double>(k0) - c;
    for (std::size_t k1 = 0; k1 < s; ++k1) {
      const double d1 = static_cast<double>(k1) - c;
      const double b0 = rot(0, 0) * d0 + rot(0, 1) * d1 + c;
      const double b1 = rot(1, 0) * d0 + rot(1, 1) * d1 + c;
      const double b2 = rot(2, 0) * d0 + rot(2, 1) * d1 + c;
      for (std::size_t k2 = 0; k2 < s; ++k2) {
        const double d2 = static_cast<double>(k2) - c;
        const long j0 = std::lround(b0 + rot(0, 2) * d2);
        const long j1 = std::lround(b1 + rot(1, 2) * d2);
        const long j2 = std::lround(b2 + rot(2, 2) * d2);
        if (j0 < 0 || j1 < 0 || j2 < 0 || j0 >= si || j1 >= si || j2 >= si) continue;
        dst[(k0 * s + k1) * s + k2] =
            src[(static_cast<std::size_t>(j0) * s + static_cast<std::size_t>(j1)) * s +
                static_cast<std::size_t>(j2)];
      }
    }
  }
  return out;
}

}  // namespace deid
