#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace txguard::util {

// 64-bit FNV-1a. Stable across platforms and releases; used for case ids,
// layout ids and RNG substream derivation, never for security.
class Fnv1a64 {
 public:
  Fnv1a64& update(std::string_view bytes) {
    for (unsigned char c : bytes) {
      state_ ^= c;
      state_ *= 0x100000001b3ULL;
    }
    return *this;
  }

  // Field separator so that ("ab","c") and ("a","bc") hash differently.
  Fnv1a64& separator() { return update(std::string_view("\x1f", 1)); }

  std::uint64_t digest() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

inline std::uint64_t fnv1a64(std::string_view bytes) { return Fnv1a64{}.update(bytes).digest(); }

std::string to_hex(std::uint64_t value);

// SplitMix64 finalizer; turns correlated integers into well-mixed seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace txguard::util
