#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "biocircuit/ode/types.hpp"

namespace biocircuit::analysis {

/// simulate_to_steady_state hit t_max at some grid point; the offending
/// disturbance value is carried in the message.
struct NoConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class DisturbanceChannel { d, d1, d2, H };

/// A model family parameterized by constant disturbances. `steady_output`
/// may be empty, in which case steady states come from simulation.
struct DisturbedFamily {
  std::function<ode::OdeSystem(double d1, double d2, double H)> build;
  std::function<double(double d1, double d2, double H)> steady_output;
  std::vector<double> x0;      // simulation start
  int output_coord = -1;       // -1 = last coordinate
};

enum class SteadyMethod { automatic, closed_form, simulate };

struct AdaptationCurve {
  std::vector<double> grid;
  std::vector<double> outputs;
  /// (max - min) / output at the nominal grid value (1, or 0 for channel H)
  double rejection_index = 0.0;
};

/// Steady output across a grid of one disturbance channel. The nominal value
/// (1, or 0 for H) must be on the grid. With `automatic`, the closed form is
/// used when the family provides one.
AdaptationCurve adaptation_curve(const DisturbedFamily& family,
                                 std::span<const double> grid,
                                 DisturbanceChannel channel,
                                 SteadyMethod method = SteadyMethod::automatic,
                                 const ode::IntegratorConfig& config = {});

}  // namespace biocircuit::analysis
