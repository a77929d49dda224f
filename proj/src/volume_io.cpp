#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "deid/error.hpp"
#include "deid/volume.hpp"

namespace deid {

namespace {

constexpr std::size_t kHeaderBytes = 20;
constexpr std::uint8_t kDtypeFloat32 = 0x01;
// Refuse anything beyond 2^31 voxels (8 GiB of float32).
constexpr std::uint64_t kMaxVoxels = 1ULL << 31;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[at + i]) << (8 * i);
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_volume(const Volume& v) {
  const Dims& d = v.dims();
  for (std::size_t s : {d.s0, d.s1, d.s2}) {
    if (s == 0 || s > 0xffffffffULL) {
      throw Error(ErrorCode::InvalidArgument, "dims " + to_string(d) + " not representable");
    }
  }
  std::vector<std::uint8_t> out{'V', 'O', 'L', '1', kDtypeFloat32, 0, 0, 0};
  out.reserve(kHeaderBytes + 4 * v.size());
  put_u32(out, static_cast<std::uint32_t>(d.s0));
  put_u32(out, static_cast<std::uint32_t>(d.s1));
  put_u32(out, static_cast<std::uint32_t>(d.s2));
  for (float f : v.data()) {
    if (!std::isfinite(f)) throw Error(ErrorCode::InvalidArgument, "volume contains non-finite data");
    put_u32(out, std::bit_cast<std::uint32_t>(f));
  }
  return out;
}

Volume decode_volume(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), "VOL1", 4) != 0) {
    throw FormatError(0, "bad magic, expected VOL1");
  }
  if (bytes.size() < kHeaderBytes) throw FormatError(bytes.size(), "truncated header");
  if (bytes[4] != kDtypeFloat32) throw FormatError(4, "unsupported dtype code");
  for (std::size_t i = 5; i < 8; ++i) {
    if (bytes[i] != 0) throw FormatError(i, "reserved header byte is nonzero");
  }
  const Dims dims{get_u32(bytes, 8), get_u32(bytes, 12), get_u32(bytes, 16)};
  if (dims.s0 == 0 || dims.s1 == 0 || dims.s2 == 0) throw FormatError(8, "zero dimension");
  const std::uint64_t voxels = static_cast<std::uint64_t>(dims.s0) * dims.s1 * dims.s2;
  if (voxels > kMaxVoxels) throw FormatError(8, "dims overflow voxel limit");

  const std::size_t expected = kHeaderBytes + 4 * static_cast<std::size_t>(voxels);
  if (bytes.size() < expected) throw FormatError(bytes.size(), "truncated payload");
  if (bytes.size() > expected) throw FormatError(expected, "trailing bytes after payload");

  std::vector<float> data(static_cast<std::size_t>(voxels));
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i] = std::bit_cast<float>(get_u32(bytes, kHeaderBytes + 4 * i));
  }
  return Volume(dims, std::move(data));
}

void write_volume(const Volume& v, const std::filesystem::path& path) {
  const auto bytes = encode_volume(v);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::InvalidArgument, "write failed: " + path.string());
}

Volume read_volume(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_volume(bytes);
}

}  // namespace deid
