#include "biocircuit/models/ffwd.hpp"

#include <cmath>
#include <stdexcept>

namespace biocircuit::models {

double FfwdParams::theta() const {
  return variant == FfwdVariant::ern ? g * (beta_bar * alpha_bar) / (gamma_bar * delta_bar)
                                     : g * alpha_bar / delta_bar;
}

void FfwdParams::validate() const {
  for (double x : {alpha_bar, delta_bar, beta_bar, gamma_bar, g, alpha, beta, gamma})
    if (!(x > 0.0) || !std::isfinite(x))
      throw std::invalid_argument("feedforward parameters must be strictly positive and finite");
  // delta = 0 is the perfect-adaptation regime and is allowed
  if (delta < 0.0 || !std::isfinite(delta))
    throw std::invalid_argument("delta must be nonnegative and finite");
}

FfwdSteady ffwd_steady_state(const FfwdParams& f, double d1, double d2) {
  f.validate();
  if (!(d1 > 0.0) || !(d2 > 0.0))
    throw std::invalid_argument("d1 and d2 must be strictly positive");
  FfwdSteady s;
  if (f.variant == FfwdVariant::ern) {
    // Evaluated in this order d1 and d2 enter only as scale factors, so X is
    // bitwise d-independent when delta == 0 and d is a power of two.
    const double m_E = (f.alpha_bar * d1) / f.delta_bar;
    const double E = (f.beta_bar * d2) * (f.alpha_bar * d1) / (f.gamma_bar * f.delta_bar);
    s.m_E = m_E;
    s.controller = E;
    s.m = (f.alpha * d1) / (f.delta + f.g * E);
    s.X = (f.beta * d2) * s.m / f.gamma;
  } else {
    const double mu = (f.alpha_bar * d1) / f.delta_bar;
    s.controller = mu;
    s.m = (f.alpha * d1) / (f.delta + f.g * mu);
    s.X = (f.beta * d2) * s.m / f.gamma;
  }
  return s;
}

ode::OdeSystem build_ffwd(const FfwdParams& f, const DisturbanceInputs& dist) {
  f.validate();
  dist.validate();
  ode::OdeSystem sys;
  sys.breakpoints = dist.breakpoints();
  if (f.variant == FfwdVariant::ern) {
    sys.dim = 4;
    sys.names = {"m_E", "E", "m", "X"};
    sys.rhs = [f, dist](double t, std::span<const double> x, std::span<double> dx) {
      const double m_E = x[0], E = x[1], m = x[2], X = x[3];
      const double d1 = dist.d1.value(t), d2 = dist.d2.value(t);
      dx[0] = f.alpha_bar * d1 - f.delta_bar * m_E;
      dx[1] = f.beta_bar * d2 * m_E - f.gamma_bar * E;
      dx[2] = f.alpha * d1 - f.delta * m - f.g * m * E;
      dx[3] = f.beta * d2 * m - f.gamma * X;
    };
  } else {
    sys.dim = 3;
    sys.names = {"mu", "m", "X"};
    sys.rhs = [f, dist](double t, std::span<const double> x, std::span<double> dx) {
      const double mu = x[0], m = x[1], X = x[2];
      const double d1 = dist.d1.value(t), d2 = dist.d2.value(t);
      dx[0] = f.alpha_bar * d1 - f.delta_bar * mu;
      dx[1] = f.alpha * d1 - f.delta * m - f.g * m * mu;
      dx[2] = f.beta * d2 * m - f.gamma * X;
    };
  }
  return sys;
}

}  // namespace biocircuit::models
