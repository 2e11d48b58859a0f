#pragma once

#include <cstdint>
#include <random>

namespace robustmean {

/// Master seed plus trial index. Trial k of a benchmark draws from the stream
/// derived from (master, k); equal pairs reproduce samples bit-for-bit.
struct RngSeed {
  std::uint64_t master = 0;
  std::uint64_t trial = 0;

  RngSeed for_trial(std::uint64_t k) const { return {master, k}; }
  std::mt19937_64 stream() const;
};

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Unbiased integer in [0, bound) by rejection; bound >= 1.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

/// Standard normal draw via Box-Muller (two uniforms per draw, no cached
/// spare, so the stream position is input-independent).
double standard_normal(std::mt19937_64& rng);

/// Pareto(scale, shape) draw by inverse-CDF transform of one uniform.
double pareto(std::mt19937_64& rng, double scale, double shape);

}  // namespace robustmean
