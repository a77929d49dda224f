#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace deid {

enum class ErrorCode {
  InvalidArgument,
  InvalidThreshold,
  DegenerateHistogram,
  NonCubicVolume,
  FormatError,
  IndexOutOfRange,
  EmptySurface,
  TooFewPoints,
  DegenerateInput,
  InvalidCount,
  TransformFailed,
  BrainOutsideHull,
  DimMismatch,
  InvalidScale,
  EmptyMask,
  InvalidPhantomParams,
  InvalidGallery,
  EmptyInput,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Malformed VOL1 stream; offset is the byte position where decoding gave up.
class FormatError : public Error {
 public:
  FormatError(std::size_t offset, const std::string& what)
      : Error(ErrorCode::FormatError, what + " (byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace deid
