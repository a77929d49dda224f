#pragma once

#include <cstdint>
#include <random>

namespace deid {

using Seed = std::uint64_t;

// Child seed for work item `index`. Used wherever work is split across
// rotations, blocks or trials so results do not depend on scheduling.
Seed derive_seed(Seed parent, std::uint64_t index) noexcept;

// Counter-based uniform draw in [0, 1): a pure function of (seed, index).
double uniform_at(Seed seed, std::uint64_t index) noexcept;

// Sequential stream for operations that consume a variable number of draws.
class SeedStream {
 public:
  explicit SeedStream(Seed seed) : engine_(derive_seed(seed, 0x5eed5eedULL)) {}

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double normal() { return normal_(engine_); }
  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace deid
