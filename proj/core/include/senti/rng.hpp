#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace senti::rng {

/// splitmix64 finalizer. Used to key generators so that nearby seeds
/// (0, 1, 2, ...) still produce unrelated streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// FNV-1a over bytes. std::hash is implementation-defined, this is not.
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Deterministic combination of a base seed and a stream index.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream));
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
  return std::mt19937_64(splitmix64(seed));
}

/// Uniform double in [0, 1). mt19937_64 output is specified by the
/// standard; scaling it ourselves keeps streams identical across
/// standard libraries (std::uniform_real_distribution is not portable).
inline double uniform_unit(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline double uniform_range(std::mt19937_64& eng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(eng);
}

/// Unbiased integer in [0, n). Rejection sampling over the top bits.
inline std::uint64_t uniform_index(std::mt19937_64& eng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = eng();
  while (x >= limit) x = eng();
  return x % n;
}

/// In-place Fisher-Yates. std::shuffle is implementation-defined; this
/// keeps epoch permutations reproducible across toolchains.
template <class T>
void shuffle(std::span<T> items, std::mt19937_64& eng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(uniform_index(eng, i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace senti::rng
