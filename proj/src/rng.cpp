#include "robustmean/rng.hpp"

#include <cmath>
#include <numbers>

namespace robustmean {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::mt19937_64 RngSeed::stream() const {
  std::uint64_t state = master;
  std::uint64_t a = splitmix64(state);
  state ^= trial * 0xD1B54A32D192ED03ULL + 0x2545F4914F6CDD1DULL;
  std::uint64_t b = splitmix64(state);
  return std::mt19937_64(a ^ (b + 0x9E3779B97F4A7C15ULL));
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0ULL - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

double standard_normal(std::mt19937_64& rng) {
  const double u1 = 1.0 - uniform01(rng);  // in (0, 1], keeps log finite
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

double pareto(std::mt19937_64& rng, double scale, double shape) {
  const double u = uniform01(rng);  // 1 - u in (0, 1]
  return scale * std::pow(1.0 - u, -1.0 / shape);
}

}  // namespace robustmean
