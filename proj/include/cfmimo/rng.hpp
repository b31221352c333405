#pragma once

#include <complex>
#include <cstdint>

namespace cfmimo {

/// Deterministic xoshiro256++ generator with splitmix64 seeding.
/// Self-contained so that results are bit-reproducible across platforms
/// and standard-library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) { reseed(seed); }

  void reseed(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller (the spare value is cached).
  double normal();

  /// Circularly-symmetric complex normal with unit variance:
  /// real and imaginary parts each N(0, 1/2).
  std::complex<double> cnormal();

 private:
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Mixes a master seed with a stream index into an independent seed.
/// Used to derive per-iteration generators so that iteration order and
/// parallel scheduling cannot affect results.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace cfmimo
