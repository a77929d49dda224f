#include "deid/random.hpp"

#include "deid/error.hpp"

namespace deid {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Seed derive_seed(Seed parent, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(parent) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

double uniform_at(Seed seed, std::uint64_t index) noexcept {
  // top 53 bits -> [0, 1)
  return static_cast<double>(derive_seed(seed, index) >> 11) * 0x1.0p-53;
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidThreshold: return "InvalidThreshold";
    case ErrorCode::DegenerateHistogram: return "DegenerateHistogram";
    case ErrorCode::NonCubicVolume: return "NonCubicVolume";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::EmptySurface: return "EmptySurface";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::InvalidCount: return "InvalidCount";
    case ErrorCode::TransformFailed: return "TransformFailed";
    case ErrorCode::BrainOutsideHull: return "BrainOutsideHull";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::InvalidScale: return "InvalidScale";
    case ErrorCode::EmptyMask: return "EmptyMask";
    case ErrorCode::InvalidPhantomParams: return "InvalidPhantomParams";
    case ErrorCode::InvalidGallery: return "InvalidGallery";
    case ErrorCode::EmptyInput: return "EmptyInput";
  }
  return "Unknown";
}

}  // namespace deid
