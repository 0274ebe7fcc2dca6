#pragma once

#include <span>

#include "biocircuit/ode/types.hpp"

namespace biocircuit::ode {

/// Integrate from t0 to t1 with an embedded Dormand-Prince 5(4) pair and
/// PI step-size control. The returned trajectory ends exactly at t1.
///
/// Throws StepSizeUnderflow or NonFiniteState.
Trajectory integrate(const OdeSystem& system, std::span<const double> x0,
                     double t0, double t1, const IntegratorConfig& config = {});

struct SteadyStateResult {
  Equilibrium equilibrium;   // classified terminal state
  Trajectory trajectory;
  bool converged = false;    // false: t_max reached before the criterion held
};

/// Run from t = 0 until ‖f‖∞ < ss_tol for ss_window consecutive accepted
/// steps, or until t_max. A non-converged run is returned flagged, not thrown.
SteadyStateResult simulate_to_steady_state(const OdeSystem& system,
                                           std::span<const double> x0,
                                           const IntegratorConfig& config = {});

}  // namespace biocircuit::ode
