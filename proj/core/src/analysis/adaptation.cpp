#include "biocircuit/analysis/adaptation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "biocircuit/ode/integrator.hpp"

namespace biocircuit::analysis {

AdaptationCurve adaptation_curve(const DisturbedFamily& family,
                                 std::span<const double> grid,
                                 DisturbanceChannel channel, SteadyMethod method,
                                 const ode::IntegratorConfig& config) {
  if (grid.empty()) throw std::invalid_argument("disturbance grid is empty");
  const double nominal = channel == DisturbanceChannel::H ? 0.0 : 1.0;
  bool has_nominal = false;
  for (double v : grid)
    if (v == nominal) has_nominal = true;
  if (!has_nominal)
    throw std::invalid_argument("disturbance grid must include the nominal value");

  const bool closed = method == SteadyMethod::closed_form ||
                      (method == SteadyMethod::automatic && family.steady_output);
  if (closed && !family.steady_output)
    throw std::invalid_argument("family has no closed-form steady state");

  AdaptationCurve curve;
  curve.grid.assign(grid.begin(), grid.end());
  double at_nominal = 0.0;
  for (double value : grid) {
    double d1 = 1.0, d2 = 1.0, H = 0.0;
    switch (channel) {
      case DisturbanceChannel::d: d1 = value; break;
      case DisturbanceChannel::d1: d1 = value; break;
      case DisturbanceChannel::d2: d2 = value; break;
      case DisturbanceChannel::H: H = value; break;
    }
    double y = 0.0;
    if (closed) {
      y = family.steady_output(d1, d2, H);
    } else {
      const ode::OdeSystem sys = family.build(d1, d2, H);
      const ode::SteadyStateResult res =
          simulate_to_steady_state(sys, family.x0, config);
      if (!res.converged)
        throw NoConvergence("no steady state before t_max at disturbance value " +
                            std::to_string(value));
      const int coord = family.output_coord >= 0 ? family.output_coord : sys.dim - 1;
      y = res.equilibrium.point[static_cast<std::size_t>(coord)];
    }
    curve.outputs.push_back(y);
    if (value == nominal) at_nominal = y;
  }

  const auto [lo, hi] = std::minmax_element(curve.outputs.begin(), curve.outputs.end());
  curve.rejection_index = (*hi - *lo) / at_nominal;
  return curve;
}

}  // namespace biocircuit::analysis
