#pragma once

#include <cstdint>
#include <cmath>

namespace cslp {

// SplitMix64 (Steele, Lea, Flood; the java.util.SplittableRandom finalizer).
// Chosen because it is a tiny, well-documented splittable generator whose
// output stream is fully determined by the 64-bit seed, so instance
// generation is reproducible from (dims, seed) alone.
//
// Gaussian variates use the Box-Muller transform on 53-bit uniforms; this
// avoids rejection loops so the number of raw draws per variate is fixed.
// Reproducibility is per-implementation: libm sin/cos/log may differ in the
// last ulp across platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53 bits of precision.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound), unbiased via rejection. bound > 0.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t residue = (UINT64_MAX % bound + 1) % bound;  // 2^64 mod bound
    const std::uint64_t cutoff = 0 - residue;  // accept r in [0, 2^64 - residue)
    std::uint64_t r;
    do {
      r = next_u64();
    } while (residue != 0 && r >= cutoff);
    return r % bound;
  }

  // Standard normal, Box-Muller; second variate of each pair is cached.
  double next_gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so log(u1) is finite.
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  bool next_bool() { return (next_u64() >> 63) != 0; }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace cslp
