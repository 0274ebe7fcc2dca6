#pragma once

#include <cstdint>

namespace biocircuit::analysis {

/// Counter-based deterministic sampling: sample i of a stream is a pure
/// function of (seed, i), so ensembles are reproducible and order-free.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t stream_word(std::uint64_t seed, std::uint64_t counter);
/// uniform in (0, 1]
double stream_uniform(std::uint64_t seed, std::uint64_t counter);
/// standard normal via Box-Muller on counters (2i, 2i+1)
double stream_normal(std::uint64_t seed, std::uint64_t index);
/// exp(sigma * z), z standard normal: log-mean 0, log-sd sigma
double stream_lognormal(std::uint64_t seed, std::uint64_t index, double sigma);

}  // namespace biocircuit::analysis
