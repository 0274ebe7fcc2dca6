#pragma once

#include <stdexcept>
#include <vector>

#include "biocircuit/models/ffwd.hpp"
#include "biocircuit/ode/types.hpp"

namespace biocircuit::analysis {

/// Adjacent trajectory samples differ by more than 10% of a coordinate's
/// scale; central differences would be meaningless.
struct GridTooCoarse : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Memory variable z = E/q - m/p with q = alpha_bar*beta_bar/delta_bar and
/// p = alpha, evaluated on a uniformly sampled trajectory of the ern system
/// run with m_E(0) = 0, d2 = 1 and constant d1. When delta = 0 the variable
/// obeys dz/dt = (g/alpha)*E*(m - v_ref) - d1*exp(-delta_bar*t) with
/// v_ref = gamma_bar*alpha*delta_bar/(g*alpha_bar*beta_bar), so m -> v_ref
/// regardless of d1. `residual` measures the distance of the numerically
/// differentiated z from that right-hand side.
struct HiddenIntegralTrace {
  std::vector<double> times;   // interior sample times
  std::vector<double> z;       // z at the interior samples
  std::vector<double> dz_dt;   // central differences
  std::vector<double> residual;
  double v_ref = 0.0;
  double max_residual = 0.0;
  double max_dz_dt = 0.0;
};

HiddenIntegralTrace hidden_integral_trace(const ode::Trajectory& trajectory,
                                          const models::FfwdParams& params,
                                          double d1);

}  // namespace biocircuit::analysis
