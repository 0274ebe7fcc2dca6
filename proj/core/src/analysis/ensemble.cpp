#include "biocircuit/analysis/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "biocircuit/analysis/rng.hpp"

namespace biocircuit::analysis {

EnsembleSummary ensemble_run(const std::function<double(double)>& output_for_disturbance,
                             std::size_t n, std::uint64_t seed, double sigma) {
  if (n < 2) throw std::invalid_argument("ensemble needs n >= 2 samples");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be strictly positive");

  EnsembleSummary summary;
  summary.n = n;
  summary.seed = seed;
  summary.sigma = sigma;
  summary.outputs.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = stream_lognormal(seed, i, sigma);
    summary.outputs[i] = output_for_disturbance(d);
    if (!std::isfinite(summary.outputs[i]))
      throw std::runtime_error("ensemble output is not finite at sample " + std::to_string(i));
  }

  double acc = 0.0;
  for (double y : summary.outputs) acc += y;
  summary.mean = acc / static_cast<double>(n);
  double var = 0.0;
  for (double y : summary.outputs) var += (y - summary.mean) * (y - summary.mean);
  var /= static_cast<double>(n);
  summary.cv = summary.mean != 0.0 ? std::sqrt(var) / std::abs(summary.mean) : 0.0;

  constexpr int kBins = 32;
  const auto [lo_it, hi_it] = std::minmax_element(summary.outputs.begin(), summary.outputs.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  const double width = hi > lo ? (hi - lo) / kBins : 1.0;
  summary.bin_edges.resize(kBins + 1);
  for (int b = 0; b <= kBins; ++b) summary.bin_edges[b] = lo + b * width;
  summary.bin_counts.assign(kBins, 0);
  for (double y : summary.outputs) {
    int b = hi > lo ? static_cast<int>((y - lo) / width) : 0;
    b = std::clamp(b, 0, kBins - 1);
    ++summary.bin_counts[static_cast<std::size_t>(b)];
  }
  return summary;
}

}  // namespace biocircuit::analysis
