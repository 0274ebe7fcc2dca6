#include "biocircuit/models/plant.hpp"

#include <cmath>
#include <stdexcept>

namespace biocircuit::models {

void PlantParams::validate() const {
  for (double v : {alpha, beta, R_TX, R_TL, delta, gamma})
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument("plant parameters must be strictly positive and finite");
}

ode::OdeSystem build_plant(const PlantParams& p, const DisturbanceInputs& dist) {
  p.validate();
  dist.validate();
  ode::OdeSystem sys;
  sys.dim = 2;
  sys.names = {"m", "X"};
  sys.breakpoints = dist.breakpoints();
  sys.rhs = [p, dist](double t, std::span<const double> x, std::span<double> dx) {
    const double m = x[0], X = x[1];
    dx[0] = p.alpha * p.R_TX * dist.d1.value(t) - p.delta * m + dist.H_GRN.value(t);
    dx[1] = p.beta * p.R_TL * dist.d2.value(t) * m - p.gamma * X + dist.r.value(t);
  };
  return sys;
}

std::array<double, 2> plant_steady_state(const PlantParams& p, double d1, double d2,
                                         double H, double r) {
  const double m = (p.alpha * p.R_TX * d1 + H) / p.delta;
  const double X = (p.beta * p.R_TL * d2 * m + r) / p.gamma;
  return {m, X};
}

}  // namespace biocircuit::models
