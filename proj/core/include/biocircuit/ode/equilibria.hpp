#pragma once

#include <span>
#include <vector>

#include "biocircuit/ode/types.hpp"

namespace biocircuit::ode {

/// Axis-aligned search region, one [lo, hi] pair per coordinate.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
  void validate(int dim) const;
};

/// Central finite-difference Jacobian of f(t_eval, .) at x,
/// step_i = max(1e-6, 1e-6*|x_i|). Row-major dim x dim.
std::vector<double> finite_difference_jacobian(const OdeSystem& system,
                                               std::span<const double> x,
                                               double t_eval = 0.0);

/// Eigenvalue real parts of the finite-difference Jacobian at x, ascending.
std::vector<double> eigenvalue_real_parts(const OdeSystem& system,
                                          std::span<const double> x,
                                          double t_eval = 0.0);

/// stable iff all real parts < -1e-6, unstable iff any > +1e-6, else marginal.
Stability stability_from_real_parts(std::span<const double> real_parts);

/// Classify a near-equilibrium point (residual <= 1e-6, else throws
/// NotAnEquilibrium).
Equilibrium classify_stability(const OdeSystem& system,
                               std::span<const double> point,
                               double t_eval = 0.0);

struct NewtonResult {
  std::vector<double> point;
  double residual = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Damped Newton on f = 0 with backtracking line search on ‖f‖².
NewtonResult newton_refine(const OdeSystem& system, std::span<const double> x0,
                           double t_eval = 0.0, int max_iterations = 60);

/// Multi-start equilibrium search: damped Newton from n_starts quasi-random
/// seeds inside the box, duplicates merged at 1e-6 relative distance, results
/// restricted to the box, classified, and sorted lexicographically.
/// Every returned equilibrium has residual <= 1e-9.
std::vector<Equilibrium> find_equilibria(const OdeSystem& system, const Box& box,
                                         int n_starts, double t_eval = 0.0);

}  // namespace biocircuit::ode
