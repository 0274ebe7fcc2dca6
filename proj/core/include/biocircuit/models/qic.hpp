#pragma once

#include "biocircuit/models/plant.hpp"
#include "biocircuit/models/schedule.hpp"
#include "biocircuit/ode/types.hpp"

namespace biocircuit::models {

enum class QicLoop { closed, open };

/// Covalent-modification-cycle controller. The modifiable protein has
/// constant total u_tot; the active fraction u drives transcription of the
/// plant through an activating Hill function.
struct QicParams {
  double k1 = 100.0;    // forward catalytic constant
  double k2 = 100.0;    // reverse catalytic constant
  double K1 = 1e-5;     // forward Michaelis constant
  double K2 = 1e-5;     // reverse Michaelis constant
  double gamma_u = 1.0; // controller species decay
  double v = 1.0;       // kinase (reference) input
  double u_tot = 0.0;   // total protein; 0 = default 100*K1
  double K_act = 7.0;   // activation Hill constant
  double a_act = 8.0;   // maximal activation rate
  double n_act = 1.0;   // activation Hill coefficient
  double w_open = 0.0;  // open-loop phosphatase level; 0 = auto-calibrate

  double epsilon() const { return gamma_u / k2; }
  double u_total() const { return u_tot > 0.0 ? u_tot : 100.0 * K1; }
  /// alpha(u) = a_act * u^n / (u^n + K_act^n)
  double activation(double u) const;
  /// inverse of activation on (0, a_act)
  double activation_inverse(double target) const;
  void validate() const;
};

/// du/dt for the phosphorylation cycle at active fraction u, phosphatase w,
/// and free substrate u0.
double mm_cycle_rate(const QicParams& q, double u0, double u, double w);

/// Zero-order reduction of the cycle: k1*v - k2*w - gamma_u*u. Valid while
/// u_tot - u >> K1 and u >> K2.
double qic_ideal_controller_rate(const QicParams& q, double w, double u);

/// Phosphatase level that makes the open-loop nominal output equal the
/// closed-loop nominal output (it equals the closed-loop steady X).
double calibrate_w_open(const QicParams& q, const PlantParams& p,
                        double d1_nominal = 1.0, double d2_nominal = 1.0,
                        double H_nominal = 0.0, double r_nominal = 0.0);

/// States (m, X, u). Plant transcription rate is activation(u)*R_TX*d1(t).
/// Closed loop: w = X. Open loop: w = w_open (auto-calibrated when 0).
ode::OdeSystem build_qic(const QicParams& q, const PlantParams& p,
                         const DisturbanceInputs& dist, QicLoop loop);

/// Fraction of trajectory time spent outside the zero-order regime
/// (u_tot - u < 10*K1 or u < 10*K2), time-weighted so adaptive step
/// clustering cannot skew it. Above 0.1 the reduction is unreliable.
double zero_order_violation_fraction(const ode::Trajectory& traj, const QicParams& q);

}  // namespace biocircuit::models
