// Deterministic random helpers. mt19937_64 output is pinned by the standard,
// but the std distributions are not, so bounded draws and shuffles are done
// by hand to keep generated traces byte-identical across platforms.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace burstsim {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Independent sub-seed for stream `lane` of a run seeded with `seed`.
inline uint64_t sub_seed(uint64_t seed, uint64_t lane) {
  return splitmix64(splitmix64(seed) ^ splitmix64(lane + 1));
}

// Uniform draw in [0, bound) by rejection; bound >= 1.
inline uint64_t draw_below(std::mt19937_64& rng, uint64_t bound) {
  if (bound <= 1) return 0;
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % bound;
}

template <typename T>
void shuffle_vec(std::vector<T>& v, std::mt19937_64& rng) {
  for (size_t i = v.size(); i > 1; --i) {
    size_t j = static_cast<size_t>(draw_below(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace burstsim
