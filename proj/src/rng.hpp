#pragma once

#include <cstdint>

namespace smmdist {

// splitmix64 (Steele/Lea/Flood). Used instead of <random> distributions so
// that seeded runs reproduce bit-for-bit across platforms and compilers.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1) with 53 random bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

// Independent stream for the given index; used to hand each sampled path or
// batch its own deterministic seed.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
  SplitMix64 g(root ^ (0x9e3779b97f4a7c15ull * (stream + 0x632be59bd9b4e019ull)));
  g.next();
  return g.next();
}

}  // namespace smmdist
