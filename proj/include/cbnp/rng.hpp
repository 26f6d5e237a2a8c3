#ifndef CBNP_RNG_HPP
#define CBNP_RNG_HPP

#include <cstdint>

namespace cbnp {

// All randomness in the project flows from one 64-bit instance seed.
// Independent streams are derived with substream(seed, tag): tags are
// stable string hashes, so adding a consumer never shifts another one.
struct SplitMix64 {
  uint64_t state;

  explicit SplitMix64(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return (next() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  uint64_t below(uint64_t n) { return next() % n; }
};

inline uint64_t hash_tag(const char* tag) {
  uint64_t h = 1469598103934665603ULL;
  for (const char* p = tag; *p; ++p) {
    h ^= static_cast<uint64_t>(*p);
    h *= 1099511628211ULL;
  }
  return h;
}

inline SplitMix64 substream(uint64_t seed, const char* tag, uint64_t index = 0) {
  SplitMix64 mix(seed ^ hash_tag(tag));
  mix.state ^= 0x5851f42d4c957f2dULL * (index + 1);
  mix.next();
  return mix;
}

}  // namespace cbnp

#endif
