#pragma once

#include "biocircuit/ode/types.hpp"

namespace biocircuit::models {

/// Two-dimensional lumped pluripotency network. x_O is the lumped Oct4/Sox2
/// level, x_N is Nanog. x_O activates itself, the x_O*x_N complex activates
/// both species, and x_O represses x_N multiplicatively. All regulation uses
/// saturating Hill terms, so each production rate is globally bounded.
struct GrnParams {
  // production of x_O
  double b_O = 0.095;     // basal
  double a_self = 6.693;  // self-activation amplitude
  double K_self = 4.0;
  double a_comp_O = 0.564;  // complex-activation amplitude
  double K_comp_O = 0.8;
  // production of x_N
  double b_N = 0.1;
  double a_comp_N = 2.54;
  double K_comp_N = 0.6;
  double K_rep = 25.0;  // x_O repression threshold
  double n_hill = 2.0;  // shared Hill coefficient
  double gamma = 1.0;   // common decay

  double u_i = 0.0;    // constant overexpression input (open-loop control)
  double G = 0.0;      // feedback gain (high-gain control)
  double x_star = 1.0; // feedback reference for x_O

  double H_O(double x_O, double x_N) const;
  double H_N(double x_O, double x_N) const;
  /// Certified bound sup H_O <= b_O + a_self + a_comp_O (each Hill term is
  /// bounded by its amplitude).
  double bound_H_O() const { return b_O + a_self + a_comp_O; }
  double bound_H_N() const { return b_N + a_comp_N; }

  // monotone pieces, exposed so the monotonicity properties are checkable
  // with the complex level c and the repressing level treated independently
  double complex_activation_N(double c) const;
  double repression(double x_O) const;

  void validate() const;
};

enum class GrnControl { open, highgain };

/// States (x_O, x_N):
///   dx_O/dt = H_O(x) - gamma*x_O + input
///   dx_N/dt = H_N(x) - gamma*x_N
/// input = u_i (open) or G*(x_star - x_O) (highgain). The feedback term can
/// only drive the rate negative through -G*x_O, so dx_O/dt >= 0 at x_O = 0.
ode::OdeSystem build_grn(const GrnParams& g, GrnControl control);

struct EnvelopeBand {
  double lower = 0.0;
  double upper = 0.0;
};

/// Trajectory envelope for dx/dt = H - (gamma+G)x + G*x_star with
/// 0 <= H <= D and x(0) = 0:
///   lower = (G*x_star/(gamma+G)) * (1 - exp(-(gamma+G)t))
///   upper = ((D+G*x_star)/(gamma+G)) * (1 - exp(-(gamma+G)t))
EnvelopeBand highgain_envelope(double t, double G, double gamma, double x_star,
                               double D);

}  // namespace biocircuit::models
