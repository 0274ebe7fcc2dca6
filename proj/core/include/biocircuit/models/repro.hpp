#pragma once

#include "biocircuit/models/grn.hpp"
#include "biocircuit/models/schedule.hpp"
#include "biocircuit/ode/types.hpp"

namespace biocircuit::models {

/// High-copy overexpression construct with matched microRNA degradation.
/// G is the copy-number gain, d the copy-number disturbance multiplier; both
/// the mRNA production G*alpha and the microRNA production G*beta see the
/// same d because they sit on the same piece of DNA.
struct ReproParams {
  double G = 1000.0;
  double alpha = 1.0;      // synthetic mRNA transcription constant
  double beta = 1.0;       // microRNA transcription constant
  double c = 1.0;          // microRNA-mRNA interaction constant
  double delta = 1.0;      // mRNA decay
  double delta_bar = 1.0;  // microRNA decay
  double kappa = 1.0;      // translation constant
  double gamma = 1.0;      // protein decay
  double d = 1.0;          // copy-number disturbance multiplier

  /// G -> infinity limits, independent of H and d.
  double m_limit() const { return alpha * delta_bar / (c * beta); }
  double x_limit() const { return kappa * alpha * delta_bar / (gamma * c * beta); }
  /// residual bounds for |H| <= D
  double m_residual_bound(double D) const { return D / (c * G * beta * d / delta_bar); }
  double x_residual_bound(double D) const {
    return kappa * D / (gamma * c * G * beta * d / delta_bar);
  }
  void validate() const;
};

struct ReproSteady {
  double m_i = 0.0;
  double mu = 0.0;
  double x_i = 0.0;
  double m_limit = 0.0;
  double x_limit = 0.0;
  double m_bound = 0.0;  // residual bound at D = H_const
  double x_bound = 0.0;
};

/// Closed-form steady state for constant drive H_const >= 0:
///   mu  = d*G*beta/delta_bar
///   m_i = (H_const + G*alpha*d) / (delta + c*G*beta*d/delta_bar)
///   x_i = kappa*m_i/gamma
ReproSteady repro_steady_state(const ReproParams& r, double H_const);

/// Standalone mode, states (m_i, mu, x_i) with exogenous drive H_i(t):
///   dm_i/dt = H_i(t) - delta*m_i + d*G*alpha - c*m_i*mu
///   dmu/dt  = d*G*beta - delta_bar*mu
///   dx_i/dt = kappa*m_i - gamma*x_i
ode::OdeSystem build_repro(const ReproParams& r, const Schedule& H_i);

/// Coupled mode, states (m_i, mu, x_O, x_N): the construct drives the x_O
/// coordinate of the network and the drive is H_O(x) itself.
ode::OdeSystem build_repro_coupled(const ReproParams& r, const GrnParams& grn);

/// Coupled mode after input removal: the synthetic production terms d*G*alpha
/// and d*G*beta are gone, the decay and degradation channels remain.
ode::OdeSystem build_repro_coupled_released(const ReproParams& r, const GrnParams& grn);

}  // namespace biocircuit::models
