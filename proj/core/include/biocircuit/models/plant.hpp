#pragma once

#include <array>

#include "biocircuit/models/schedule.hpp"
#include "biocircuit/ode/types.hpp"

namespace biocircuit::models {

/// Two-stage gene expression: transcription at rate alpha*R_TX and
/// translation at rate beta*R_TL, first-order decay of both species.
struct PlantParams {
  double alpha = 1.0;  // transcription gain, per free-resource unit
  double beta = 1.0;   // translation gain
  double R_TX = 1.0;   // free transcriptional resources
  double R_TL = 1.0;   // free translational resources
  double delta = 1.0;  // mRNA decay
  double gamma = 1.0;  // protein decay

  double k() const { return alpha * R_TX; }
  double kappa() const { return beta * R_TL; }
  void validate() const;
};

/// States (m, X):
///   dm/dt = alpha*R_TX*d1(t) - delta*m + H_GRN(t)
///   dX/dt = beta*R_TL*d2(t)*m - gamma*X + r(t)
/// Output of interest is X.
ode::OdeSystem build_plant(const PlantParams& p, const DisturbanceInputs& dist = {});

/// Closed-form steady state (m, X) for constant inputs.
std::array<double, 2> plant_steady_state(const PlantParams& p, double d1 = 1.0,
                                         double d2 = 1.0, double H = 0.0,
                                         double r = 0.0);

}  // namespace biocircuit::models
