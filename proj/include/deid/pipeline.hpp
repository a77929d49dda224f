#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "deid/privacy.hpp"
#include "deid/volume.hpp"

namespace deid {

enum class DeidMethod { Remodel, QuickshearLike, SkullStrip, Black, Original };

std::string_view to_string(DeidMethod m);
// Accepts the CLI spellings: remodel, quickshear, skullstrip, black, original.
DeidMethod parse_method(std::string_view name);
const std::vector<DeidMethod>& all_methods();

// Generator contract: gamma + seed -> full-resolution volume with values in [0, 1].
using Remodeler = std::function<Volume(const PrivacyTransform&, Seed)>;

struct RemodelParams {
  double shell_depth = 3.0;       // D: voxels from the hull surface to full tissue level
  double tissue_level = 0.8;      // t_base
  double noise_amplitude = 0.04;  // peak of the low-frequency noise field
};

// Brain voxels from x, everything else from g.
Volume composite(const Volume& x, const Volume& brain, const Volume& g);

// City-block distance of each set voxel to the nearest unset voxel, where
// everything beyond the grid counts as unset. Unset voxels get 0.
std::vector<std::uint32_t> cityblock_depth(const Volume& mask);

// clamp(depth / D, 0, 1) * t_base inside the hull, 0 outside.
Volume remodel_profile(const Volume& hull, const RemodelParams& params);
// Smooth seeded field: sum of four random low-frequency plane waves scaled to
// noise_amplitude.
Volume remodel_noise(const Dims& dims, Seed seed, const RemodelParams& params);
// Non-learned stand-in for the generator: clamp(profile + noise, 0, 1) inside
// the hull, 0 outside. Depends only on gamma and seed.
Volume reference_remodel(const PrivacyTransform& gamma, Seed seed, const RemodelParams& params = {});

// Shear plane tangent to the brain's sagittal shadow on its inferior-anterior
// side (k0 inferior -> superior, k1 posterior -> anterior); voxels more than
// `pad` voxels beyond the plane are zeroed. Brain voxels are never removed.
Volume quickshear_baseline(const Volume& x, const Volume& brain, double pad = 0.0);

// b o x.
Volume skull_strip_baseline(const Volume& x, const Volume& brain);

struct DeidParams {
  PrivacyTransformParams transform;
  RemodelParams remodel;
  double quickshear_pad = 0.0;
  // Replaces reference_remodel (e.g. output of an external generator);
  // gated to the hull before compositing.
  std::optional<Volume> generator_output;
  Remodeler remodeler;  // optional custom remodeler, takes precedence over reference_remodel
};

struct DeidResult {
  Volume output;
  std::optional<PrivacyTransform> gamma;  // REMODEL only
};

DeidResult deidentify_full(const Volume& x, const Volume& brain, DeidMethod method, const DeidParams& params,
                           Seed seed);
Volume deidentify(const Volume& x, const Volume& brain, DeidMethod method, const DeidParams& params, Seed seed);

}  // namespace deid
