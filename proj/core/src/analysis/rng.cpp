#include "biocircuit/analysis/rng.hpp"

#include <cmath>
#include <numbers>

namespace biocircuit::analysis {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_word(std::uint64_t seed, std::uint64_t counter) {
  return mix64(seed + counter * 0x9E3779B97F4A7C15ULL);
}

double stream_uniform(std::uint64_t seed, std::uint64_t counter) {
  const std::uint64_t bits = stream_word(seed, counter) >> 11;  // 53 bits
  return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

double stream_normal(std::uint64_t seed, std::uint64_t index) {
  const double u1 = stream_uniform(seed, 2 * index);
  const double u2 = stream_uniform(seed, 2 * index + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double stream_lognormal(std::uint64_t seed, std::uint64_t index, double sigma) {
  return std::exp(sigma * stream_normal(seed, index));
}

}  // namespace biocircuit::analysis
