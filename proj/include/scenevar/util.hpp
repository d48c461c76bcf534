#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace scenevar {

// splitmix64; used to derive independent sub-seeds from one master seed.
inline uint64_t mix_seed(uint64_t seed) {
  uint64_t z = seed + 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline uint64_t combine_seed(uint64_t a, uint64_t b) { return mix_seed(a ^ mix_seed(b)); }

inline uint64_t fnv1a(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

inline uint64_t combine_seed(uint64_t a, std::string_view s) { return combine_seed(a, fnv1a(s)); }

using Rng = std::mt19937_64;

inline Rng make_rng(uint64_t seed) { return Rng(mix_seed(seed)); }

std::string to_lower(std::string_view s);

}  // namespace scenevar
