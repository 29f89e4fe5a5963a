// Deterministic random streams with seed-derived substreams.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace diffmac {

// SplitMix64 finalizer, used to derive engine seeds from (seed, tag, index).
inline constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Random stream: a seeded mt19937_64 plus frozen transforms. The engine's
// output sequence is pinned by the standard and the uniform/normal
// transforms are fixed here, so a seed reproduces the same values anywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal, Marsaglia polar method; pairs are generated and the
  // second value is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Substream for (seed, tag, index). Streams depend only on these values,
// never on execution order, so parallel workers reproduce serial results.
inline Rng substream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
  return Rng(mix64(mix64(seed ^ mix64(tag)) + index));
}

}  // namespace diffmac
