#include "biocircuit/analysis/hidden_integral.hpp"

#include <cmath>
#include <stdexcept>

namespace biocircuit::analysis {

HiddenIntegralTrace hidden_integral_trace(const ode::Trajectory& trajectory,
                                          const models::FfwdParams& params,
                                          double d1) {
  if (params.variant != models::FfwdVariant::ern)
    throw std::invalid_argument("hidden integral trace requires the ern variant");
  if (trajectory.size() < 3)
    throw std::invalid_argument("trajectory too short for central differences");
  const int iE = trajectory.index_of("E");
  const int im = trajectory.index_of("m");
  if (std::abs(trajectory.value(0, trajectory.index_of("m_E"))) > 1e-12)
    throw std::invalid_argument("trajectory must start from m_E(0) = 0");

  // uniform sampling required
  const double h = trajectory.times[1] - trajectory.times[0];
  for (std::size_t k = 1; k < trajectory.size(); ++k) {
    const double dt = trajectory.times[k] - trajectory.times[k - 1];
    if (std::abs(dt - h) > 1e-9 * std::max(1.0, std::abs(trajectory.times[k])))
      throw std::invalid_argument("hidden integral trace requires a uniform sample grid");
  }

  // coarseness gate: jumps above 10% of a coordinate's trajectory scale
  std::vector<double> scale(static_cast<std::size_t>(trajectory.dim), 1e-12);
  for (std::size_t k = 0; k < trajectory.size(); ++k)
    for (int j = 0; j < trajectory.dim; ++j)
      scale[static_cast<std::size_t>(j)] =
          std::max(scale[static_cast<std::size_t>(j)], std::abs(trajectory.value(k, j)));
  for (std::size_t k = 1; k < trajectory.size(); ++k)
    for (int j = 0; j < trajectory.dim; ++j)
      if (std::abs(trajectory.value(k, j) - trajectory.value(k - 1, j)) >
          0.1 * scale[static_cast<std::size_t>(j)])
        throw GridTooCoarse("adjacent samples differ by more than 10% of the coordinate scale");

  const double q = params.alpha_bar * params.beta_bar / params.delta_bar;
  const double p = params.alpha;
  HiddenIntegralTrace trace;
  trace.v_ref = params.gamma_bar * params.alpha * params.delta_bar /
                (params.g * params.alpha_bar * params.beta_bar);

  auto z_at = [&](std::size_t k) {
    return trajectory.value(k, iE) / q - trajectory.value(k, im) / p;
  };
  for (std::size_t k = 1; k + 1 < trajectory.size(); ++k) {
    const double t = trajectory.times[k];
    const double dz = (z_at(k + 1) - z_at(k - 1)) / (2.0 * h);
    const double model = (params.g / params.alpha) * trajectory.value(k, iE) *
                             (trajectory.value(k, im) - trace.v_ref) -
                         d1 * std::exp(-params.delta_bar * t);
    trace.times.push_back(t);
    trace.z.push_back(z_at(k));
    trace.dz_dt.push_back(dz);
    trace.residual.push_back(std::abs(dz - model));
    trace.max_residual = std::max(trace.max_residual, trace.residual.back());
    trace.max_dz_dt = std::max(trace.max_dz_dt, std::abs(dz));
  }
  return trace;
}

}  // namespace biocircuit::analysis
