#pragma once

#include <cstdint>
#include <string_view>

namespace maxstab {

// 64-bit finalizer from SplitMix64; full avalanche, bijective.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// FNV-1a, used to hash estimand tags and parameter bytes into stream keys.
constexpr std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xCBF29CE484222325ULL) {
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

inline std::uint64_t fnv1a_bytes(const void* p, std::size_t n, std::uint64_t h = 0xCBF29CE484222325ULL) {
  const auto* b = static_cast<const unsigned char*>(p);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= b[i];
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Counter-based stream in the SplitMix64 family.  A stream is identified by a
// key; successive outputs are the finalizer applied to key + i*golden, so any
// number of streams can be split off a root seed without shared state.
class RngStream {
 public:
  explicit RngStream(std::uint64_t key) : key_(key), ctr_(0) {}

  std::uint64_t next_u64() { return mix64(key_ + (++ctr_) * kGolden); }

  // Uniform on the open interval (0,1); safe to pass to log().
  double next_open01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1p-53;
  }

  std::uint64_t counter() const { return ctr_; }

 private:
  std::uint64_t key_;
  std::uint64_t ctr_;
};

// Derives an independent stream key from a root seed, an operation tag and a
// block index.  Each (operation, index) pair gets its own stream.
inline std::uint64_t derive_stream_key(std::uint64_t root, std::uint64_t tag, std::uint64_t index) {
  std::uint64_t h = mix64(root + kGolden);
  h = mix64(h ^ (tag * 0xFF51AFD7ED558CCDULL));
  h = mix64(h ^ (index * 0xC4CEB9FE1A85EC53ULL));
  return h;
}

}  // namespace maxstab
