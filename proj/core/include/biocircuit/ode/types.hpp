#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace biocircuit::ode {

/// Step size fell below the representable minimum; the problem is stiffer
/// than the tolerances allow. Relax rtol/atol or shorten the span.
struct StepSizeUnderflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The state left the finite range (model blow-up).
struct NonFiniteState : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// classify_stability was handed a point whose residual exceeds the
/// near-equilibrium threshold.
struct NotAnEquilibrium : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using RhsFn =
    std::function<void(double t, std::span<const double> x, std::span<double> dxdt)>;

/// A smooth ODE system dx/dt = f(t, x) of small dimension.
///
/// `breakpoints` lists times the integrator must land on exactly and never
/// step across (used for piecewise-constant input switches).
struct OdeSystem {
  int dim = 0;
  std::vector<std::string> names;
  RhsFn rhs;
  std::vector<double> breakpoints;

  std::vector<double> eval(double t, std::span<const double> x) const;
  /// ‖f(t, x)‖∞
  double residual_inf(double t, std::span<const double> x) const;
  int index_of(const std::string& name) const;
};

struct IntegratorConfig {
  double rtol = 1e-8;
  double atol = 1e-10;
  double h_init = 0.0;   // 0 = choose automatically
  double h_max = 0.0;    // 0 = no cap beyond span and breakpoints
  double t_max = 1000.0; // horizon for steady-state searches
  double ss_tol = 1e-9;  // steady state when ‖f‖∞ stays below this
  int ss_window = 5;     // ... for this many consecutive accepted steps
  double sample_dt = 0.0; // 0 = record accepted steps; >0 = uniform grid

  void validate() const;
};

struct Trajectory {
  int dim = 0;
  std::vector<std::string> names;
  std::vector<double> times;
  std::vector<double> data; // row-major, times.size() * dim entries

  std::size_t size() const { return times.size(); }
  std::span<const double> state(std::size_t i) const {
    return {data.data() + i * static_cast<std::size_t>(dim),
            static_cast<std::size_t>(dim)};
  }
  double value(std::size_t i, int coord) const {
    return data[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(coord)];
  }
  std::vector<double> back_state() const;
  std::vector<double> column(int coord) const;
  int index_of(const std::string& name) const;
};

enum class Stability { stable, unstable, marginal };

std::string to_string(Stability s);

/// A classified fixed point. `eigen_real_parts` is sorted ascending.
struct Equilibrium {
  std::vector<double> point;
  double residual = 0.0;
  Stability stability = Stability::marginal;
  std::vector<double> eigen_real_parts;
};

}  // namespace biocircuit::ode
