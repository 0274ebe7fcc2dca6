#pragma once

#include <optional>

#include "biocircuit/models/schedule.hpp"
#include "biocircuit/ode/types.hpp"

namespace biocircuit::models {

enum class FfwdVariant { ern, microrna };

/// Incoherent feedforward controller that degrades the plant mRNA.
/// The ern variant routes the controller through its own mRNA and protein
/// (sensing both transcription and translation); the microrna variant is
/// produced without translation and senses d1 only.
struct FfwdParams {
  double alpha_bar = 1.0;  // controller transcription
  double delta_bar = 1.0;  // controller mRNA (or microRNA) decay
  double beta_bar = 1.0;   // controller translation (ern only)
  double gamma_bar = 1.0;  // controller protein decay (ern only)
  double g = 1.0;          // mRNA-controller interaction rate
  double alpha = 1.0;      // plant transcription
  double beta = 1.0;       // plant translation
  double delta = 1.0;      // plant mRNA decay; zero gives perfect adaptation
  double gamma = 1.0;      // plant protein decay
  FfwdVariant variant = FfwdVariant::ern;

  /// Effective feedforward strength: g*beta_bar*alpha_bar/(gamma_bar*delta_bar)
  /// for ern, g*alpha_bar/delta_bar for microrna.
  double theta() const;
  void validate() const;
};

struct FfwdSteady {
  std::optional<double> m_E;  // ern only
  double controller = 0.0;    // E or mu
  double m = 0.0;
  double X = 0.0;
};

/// Closed-form steady state for constant disturbances d1, d2 > 0.
FfwdSteady ffwd_steady_state(const FfwdParams& f, double d1, double d2);

/// ern: states (m_E, E, m, X). microrna: states (mu, m, X).
ode::OdeSystem build_ffwd(const FfwdParams& f, const DisturbanceInputs& dist = {});

}  // namespace biocircuit::models
