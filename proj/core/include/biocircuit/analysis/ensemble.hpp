#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace biocircuit::analysis {

struct EnsembleSummary {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double sigma = 0.0;
  std::vector<double> outputs;  // in sample-index order
  double mean = 0.0;
  double cv = 0.0;  // population standard deviation over mean
  std::vector<double> bin_edges;       // 33 edges spanning [min, max]
  std::vector<std::size_t> bin_counts; // 32 bins
};

/// Evaluate `output_for_disturbance` at n lognormal(0, sigma) draws of the
/// disturbance. Samples are counter-based on (seed, index) and reduced in
/// index order, so the result is bit-reproducible for fixed (seed, n).
EnsembleSummary ensemble_run(const std::function<double(double)>& output_for_disturbance,
                             std::size_t n, std::uint64_t seed, double sigma);

}  // namespace biocircuit::analysis
