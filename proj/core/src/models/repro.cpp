#include "biocircuit/models/repro.hpp"

#include <cmath>
#include <stdexcept>

namespace biocircuit::models {

void ReproParams::validate() const {
  for (double v : {G, alpha, beta, c, delta, delta_bar, kappa, gamma, d})
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument("repro parameters must be strictly positive and finite");
}

ReproSteady repro_steady_state(const ReproParams& r, double H_const) {
  r.validate();
  if (H_const < 0.0) throw std::invalid_argument("H_const must be nonnegative");
  ReproSteady s;
  s.mu = r.d * r.G * r.beta / r.delta_bar;
  s.m_i = (H_const + r.G * r.alpha * r.d) / (r.delta + r.c * r.G * r.beta * r.d / r.delta_bar);
  s.x_i = r.kappa * s.m_i / r.gamma;
  s.m_limit = r.m_limit();
  s.x_limit = r.x_limit();
  s.m_bound = r.m_residual_bound(H_const);
  s.x_bound = r.x_residual_bound(H_const);
  return s;
}

ode::OdeSystem build_repro(const ReproParams& r, const Schedule& H_i) {
  r.validate();
  if (H_i.min_value() < 0.0)
    throw std::invalid_argument("H_i schedule must be nonnegative");
  ode::OdeSystem sys;
  sys.dim = 3;
  sys.names = {"m_i", "mu", "x_i"};
  sys.breakpoints = H_i.switch_times();
  sys.rhs = [r, H_i](double t, std::span<const double> x, std::span<double> dx) {
    const double m = x[0], mu = x[1], xi = x[2];
    dx[0] = H_i.value(t) - r.delta * m + r.d * r.G * r.alpha - r.c * m * mu;
    dx[1] = r.d * r.G * r.beta - r.delta_bar * mu;
    dx[2] = r.kappa * m - r.gamma * xi;
  };
  return sys;
}

namespace {

ode::OdeSystem coupled_system(const ReproParams& r, const GrnParams& grn,
                              bool released) {
  r.validate();
  grn.validate();
  const double production_m = released ? 0.0 : r.d * r.G * r.alpha;
  const double production_mu = released ? 0.0 : r.d * r.G * r.beta;
  ode::OdeSystem sys;
  sys.dim = 4;
  sys.names = {"m_i", "mu", "x_O", "x_N"};
  sys.rhs = [r, grn, production_m, production_mu](double, std::span<const double> x,
                                                  std::span<double> dx) {
    const double m = x[0], mu = x[1], x_O = x[2], x_N = x[3];
    dx[0] = grn.H_O(x_O, x_N) - r.delta * m + production_m - r.c * m * mu;
    dx[1] = production_mu - r.delta_bar * mu;
    dx[2] = r.kappa * m - r.gamma * x_O;
    dx[3] = grn.H_N(x_O, x_N) - grn.gamma * x_N;
  };
  return sys;
}

}  // namespace

ode::OdeSystem build_repro_coupled(const ReproParams& r, const GrnParams& grn) {
  return coupled_system(r, grn, false);
}

ode::OdeSystem build_repro_coupled_released(const ReproParams& r, const GrnParams& grn) {
  return coupled_system(r, grn, true);
}

}  // namespace biocircuit::models
