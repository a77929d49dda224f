#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>

#include "deid/random.hpp"
#include "deid/volume.hpp"

namespace deid {

// Frame: k0 inferior -> superior, k1 posterior -> anterior, k2 left -> right.
// Facial features are carved into the head ellipsoid so the nose ridge is
// what remains between the cheek and eye dents.
struct Identity {
  std::array<double, 3> head_axes{};  // voxels, each in [S/5, S/3]
  double nose_size = 0.12;            // half-width of the ridge, unit-sphere units, [0.06, 0.2]
  double nose_position = 0.0;         // vertical shift of nose and cheeks, [-0.12, 0.12]
  double brow_depth = 0.08;           // forehead dent depth, [0.02, 0.16]
  double jaw_width = 0.6;             // lateral position of the jaw dents, [0.45, 0.75]
  double eye_spacing = 0.34;          // [0.26, 0.42]
  double eye_size = 0.16;             // [0.12, 0.2]
  double mouth_width = 0.22;          // [0.14, 0.3]
  Seed texture_seed = 0;              // soft-tissue and face texture

  friend bool operator==(const Identity&, const Identity&) = default;
};

struct PhantomParams {
  std::size_t side = 64;
  double brain_scale = 0.62;     // brain semi-axes relative to the head
  double csf_rim = 0.12;         // relative thickness of the extra-brain fluid rim
  double ventricle_scale = 0.22;  // ventricle semi-axes relative to the brain
  bool muscle = true;             // temporal muscle patches at brain-tissue intensity
  bool vary_head_size = false;    // only used when identity is drawn from the seed
  std::optional<Identity> identity;  // overrides the identity derived from the seed

  void validate() const;
};

struct Phantom {
  Volume scan;
  Volume brain;
  Identity identity;
  std::uint64_t subject_id = 0;
};

// Default head semi-axes for side S.
std::array<double, 3> default_head_axes(std::size_t side);

// Identity draw. Head size is fixed unless vary_head_size is set.
Identity random_identity(Seed seed, std::size_t side, bool vary_head_size = false);

// Throws InvalidPhantomParams when the identity or params are out of range.
void validate_identity(const Identity& id, std::size_t side);

// Deterministic in (seed, params). Brain texture and background noise come
// from the seed, everything identity-specific from the identity.
Phantom generate_phantom(Seed seed, const PhantomParams& params = {});

}  // namespace deid
