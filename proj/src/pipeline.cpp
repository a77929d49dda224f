#include "deid/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "deid/error.hpp"

namespace deid {

namespace {

constexpr std::uint64_t kTransformTag = 1;
constexpr std::uint64_t kRemodelTag = 2;

void require_mask(const Volume& b, const char* what) {
  if (!b.is_mask()) throw Error(ErrorCode::InvalidArgument, std::string(what) + ": brain mask must be binary");
}

}  // namespace

std::string_view to_string(DeidMethod m) {
  switch (m) {
    case DeidMethod::Remodel: return "remodel";
    case DeidMethod::QuickshearLike: return "quickshear";
    case DeidMethod::SkullStrip: return "skullstrip";
    case DeidMethod::Black: return "black";
    case DeidMethod::Original: return "original";
  }
  return "unknown";
}

DeidMethod parse_method(std::string_view name) {
  for (DeidMethod m : all_methods()) {
    if (to_string(m) == name) return m;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown method '" + std::string(name) + "'");
}

const std::vector<DeidMethod>& all_methods() {
  static const std::vector<DeidMethod> methods{DeidMethod::Original, DeidMethod::Black, DeidMethod::SkullStrip,
                                               DeidMethod::QuickshearLike, DeidMethod::Remodel};
  return methods;
}

Volume composite(const Volume& x, const Volume& brain, const Volume& g) {
  require_same_dims(x, brain, "composite");
  require_same_dims(x, g, "composite");
  require_mask(brain, "composite");
  Volume out(x.dims());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = brain[i] == 1.0f ? x[i] : g[i];
  return out;
}

std::vector<std::uint32_t> cityblock_depth(const Volume& mask) {
  const Dims d = mask.dims();
  constexpr auto kInf = std::numeric_limits<std::uint32_t>::max() / 2;
  std::vector<std::uint32_t> dt(mask.size());
  for (std::size_t i = 0; i < dt.size(); ++i) dt[i] = mask[i] != 0.0f ? kInf : 0;

  // Two raster passes are exact for the L1 metric; off-grid neighbors are 0.
  auto at = [&](long k0, long k1, long k2) -> std::uint32_t {
    if (k0 < 0 || k1 < 0 || k2 < 0 || k0 >= static_cast<long>(d.s0) || k1 >= static_cast<long>(d.s1) ||
        k2 >= static_cast<long>(d.s2)) {
      return 0;
    }
    return dt[mask.index(static_cast<std::size_t>(k0), static_cast<std::size_t>(k1), static_cast<std::size_t>(k2))];
  };
  const auto n0 = static_cast<long>(d.s0), n1 = static_cast<long>(d.s1), n2 = static_cast<long>(d.s2);
  for (long k0 = 0; k0 < n0; ++k0) {
    for (long k1 = 0; k1 < n1; ++k1) {
      for (long k2 = 0; k2 < n2; ++k2) {
        auto& v = dt[mask.index(static_cast<std::size_t>(k0), static_cast<std::size_t>(k1), static_cast<std::size_t>(k2))];
        if (v == 0) continue;
        v = std::min({v, at(k0 - 1, k1, k2) + 1, at(k0, k1 - 1, k2) + 1, at(k0, k1, k2 - 1) + 1});
      }
    }
  }
  for (long k0 = n0 - 1; k0 >= 0; --k0) {
    for (long k1 = n1 - 1; k1 >= 0; --k1) {
      for (long k2 = n2 - 1; k2 >= 0; --k2) {
        auto& v = dt[mask.index(static_cast<std::size_t>(k0), static_cast<std::size_t>(k1), static_cast<std::size_t>(k2))];
        if (v == 0) continue;
        v = std::min({v, at(k0 + 1, k1, k2) + 1, at(k0, k1 + 1, k2) + 1, at(k0, k1, k2 + 1) + 1});
      }
    }
  }
  return dt;
}

Volume remodel_profile(const Volume& hull, const RemodelParams& params) {
  if (!(params.shell_depth > 0.0)) throw Error(ErrorCode::InvalidArgument, "shell depth must be positive");
  const auto depth = cityblock_depth(hull);
  Volume out(hull.dims());
  for (std::size_t i = 0; i < depth.size(); ++i) {
    if (depth[i] == 0) continue;
    out[i] = static_cast<float>(std::min(static_cast<double>(depth[i]) / params.shell_depth, 1.0) * params.tissue_level);
  }
  return out;
}

Volume remodel_noise(const Dims& dims, Seed seed, const RemodelParams& params) {
  constexpr int kWaves = 4;
  struct Wave {
    double f0, f1, f2, phase;
  };
  SeedStream stream(seed);
  std::vector<Wave> waves;
  for (int w = 0; w < kWaves; ++w) {
    Wave wave{};
    do {
      wave.f0 = static_cast<double>(stream.below(5)) - 2.0;
      wave.f1 = static_cast<double>(stream.below(5)) - 2.0;
      wave.f2 = static_cast<double>(stream.below(5)) - 2.0;
    } while (wave.f0 == 0.0 && wave.f1 == 0.0 && wave.f2 == 0.0);
    wave.phase = 2.0 * std::numbers::pi * stream.uniform();
    waves.push_back(wave);
  }
  Volume out(dims);
  const double t0 = 2.0 * std::numbers::pi / static_cast<double>(dims.s0);
  const double t1 = 2.0 * std::numbers::pi / static_cast<double>(dims.s1);
  const double t2 = 2.0 * std::numbers::pi / static_cast<double>(dims.s2);
  for (std::size_t k0 = 0; k0 < dims.s0; ++k0) {
    for (std::size_t k1 = 0; k1 < dims.s1; ++k1) {
      for (std::size_t k2 = 0; k2 < dims.s2; ++k2) {
        double acc = 0.0;
        for (const Wave& w : waves) {
          acc += std::cos(w.f0 * t0 * static_cast<double>(k0) + w.f1 * t1 * static_cast<double>(k1) +
                          w.f2 * t2 * static_cast<double>(k2) + w.phase);
        }
        out(k0, k1, k2) = static_cast<float>(params.noise_amplitude * acc / kWaves);
      }
    }
  }
  return out;
}

Volume reference_remodel(const PrivacyTransform& gamma, Seed seed, const RemodelParams& params) {
  const Volume profile = remodel_profile(gamma.hull, params);
  const Volume noise = remodel_noise(gamma.hull.dims(), seed, params);
  Volume out(gamma.hull.dims());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (gamma.hull[i] != 1.0f) continue;
    out[i] = std::clamp(profile[i] + noise[i], 0.0f, 1.0f);
  }
  return out;
}

Volume quickshear_baseline(const Volume& x, const Volume& brain, double pad) {
  require_same_dims(x, brain, "quickshear_baseline");
  require_mask(brain, "quickshear_baseline");
  if (!(pad >= 0.0)) throw Error(ErrorCode::InvalidArgument, "pad must be non-negative");
  const Dims d = x.dims();

  // Sagittal shadow of the brain in (k0, k1).
  std::vector<std::array<long, 2>> shadow;
  for (std::size_t k0 = 0; k0 < d.s0; ++k0) {
    for (std::size_t k1 = 0; k1 < d.s1; ++k1) {
      for (std::size_t k2 = 0; k2 < d.s2; ++k2) {
        if (brain(k0, k1, k2) == 1.0f) {
          shadow.push_back({static_cast<long>(k0), static_cast<long>(k1)});
          break;
        }
      }
    }
  }
  if (shadow.empty()) throw Error(ErrorCode::EmptyMask, "brain mask is empty");

  // Monotone chain, counter-clockwise in (k0, k1).
  auto turn = [](const std::array<long, 2>& o, const std::array<long, 2>& a, const std::array<long, 2>& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<std::array<long, 2>> hull;
  for (const auto& p : shadow) {
    while (hull.size() >= 2 && turn(hull[hull.size() - 2], hull.back(), p) <= 0) hull.pop_back();
    hull.push_back(p);
  }
  const std::size_t lower = hull.size() + 1;
  for (auto it = shadow.rbegin() + 1; it != shadow.rend(); ++it) {
    while (hull.size() >= lower && turn(hull[hull.size() - 2], hull.back(), *it) <= 0) hull.pop_back();
    hull.push_back(*it);
  }
  if (hull.size() > 1) hull.pop_back();

  // Edge whose outward normal points closest to inferior-anterior (-k0, +k1).
  const double t0 = -std::numbers::sqrt2 / 2.0, t1 = std::numbers::sqrt2 / 2.0;
  double n0 = t0, n1 = t1;
  std::array<long, 2> anchor = hull.front();
  double best = -2.0;
  for (std::size_t i = 0; hull.size() > 1 && i < hull.size(); ++i) {
    const auto& p = hull[i];
    const auto& q = hull[(i + 1) % hull.size()];
    const double e0 = static_cast<double>(q[0] - p[0]), e1 = static_cast<double>(q[1] - p[1]);
    const double len = std::hypot(e0, e1);
    const double m0 = e1 / len, m1 = -e0 / len;
    const double score = m0 * t0 + m1 * t1;
    if (score > best + 1e-12) {
      best = score;
      n0 = m0;
      n1 = m1;
      anchor = p;
    }
  }
  const double offset = n0 * static_cast<double>(anchor[0]) + n1 * static_cast<double>(anchor[1]) + pad;

  Volume out = x;
  for (std::size_t k0 = 0; k0 < d.s0; ++k0) {
    for (std::size_t k1 = 0; k1 < d.s1; ++k1) {
      if (n0 * static_cast<double>(k0) + n1 * static_cast<double>(k1) - offset <= 1e-9) continue;
      for (std::size_t k2 = 0; k2 < d.s2; ++k2) {
        const std::size_t i = out.index(k0, k1, k2);
        if (brain[i] != 1.0f) out[i] = 0.0f;
      }
    }
  }
  return out;
}

Volume skull_strip_baseline(const Volume& x, const Volume& brain) {
  require_same_dims(x, brain, "skull_strip_baseline");
  Volume out(x.dims());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = brain[i] == 1.0f ? x[i] : 0.0f;
  return out;
}

DeidResult deidentify_full(const Volume& x, const Volume& brain, DeidMethod method, const DeidParams& params,
                           Seed seed) {
  require_same_dims(x, brain, "deidentify");
  switch (method) {
    case DeidMethod::Original: return {x, std::nullopt};
    case DeidMethod::Black: return {Volume(x.dims()), std::nullopt};
    case DeidMethod::SkullStrip: return {skull_strip_baseline(x, brain), std::nullopt};
    case DeidMethod::QuickshearLike: return {quickshear_baseline(x, brain, params.quickshear_pad), std::nullopt};
    case DeidMethod::Remodel: break;
  }

  PrivacyTransformParams tp = params.transform;
  tp.surface.seed = derive_seed(seed, kTransformTag);
  PrivacyTransform gamma = build_privacy_transform(x, brain, tp);
  const Seed remodel_seed = derive_seed(seed, kRemodelTag);

  Volume generated;
  if (params.remodeler) {
    generated = params.remodeler(gamma, remodel_seed);
  } else if (params.generator_output) {
    generated = *params.generator_output;
  } else {
    generated = reference_remodel(gamma, remodel_seed, params.remodel);
  }
  require_same_dims(x, generated, "remodeler output");
  // Suppress anything the generator placed outside the head hull.
  for (std::size_t i = 0; i < generated.size(); ++i) {
    if (gamma.hull[i] != 1.0f) generated[i] = 0.0f;
  }
  Volume y = composite(x, brain, generated);
  return {std::move(y), std::move(gamma)};
}

Volume deidentify(const Volume& x, const Volume& brain, DeidMethod method, const DeidParams& params, Seed seed) {
  return deidentify_full(x, brain, method, params, seed).output;
}

}  // namespace deid
