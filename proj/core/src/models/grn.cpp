#include "biocircuit/models/grn.hpp"

#include <cmath>
#include <stdexcept>

namespace biocircuit::models {
namespace {

double hill_up(double x, double K, double n) {
  if (x <= 0.0) return 0.0;
  const double xn = std::pow(x, n);
  return xn / (std::pow(K, n) + xn);
}

}  // namespace

double GrnParams::complex_activation_N(double c) const {
  return b_N + a_comp_N * hill_up(c, K_comp_N, n_hill);
}

double GrnParams::repression(double x_O) const {
  if (x_O <= 0.0) return 1.0;
  return 1.0 / (1.0 + std::pow(x_O / K_rep, n_hill));
}

double GrnParams::H_O(double x_O, double x_N) const {
  const double c = x_O * x_N;
  return b_O + a_self * hill_up(x_O, K_self, n_hill) +
         a_comp_O * hill_up(c, K_comp_O, n_hill);
}

double GrnParams::H_N(double x_O, double x_N) const {
  const double c = x_O * x_N;
  return complex_activation_N(c) * repression(x_O);
}

void GrnParams::validate() const {
  for (double v : {b_O, a_self, K_self, a_comp_O, K_comp_O, b_N, a_comp_N, K_comp_N,
                   K_rep, n_hill, gamma})
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument("GRN parameters must be strictly positive and finite");
  if (u_i < 0.0 || G < 0.0 || x_star < 0.0)
    throw std::invalid_argument("u_i, G and x_star must be nonnegative");
}

ode::OdeSystem build_grn(const GrnParams& g, GrnControl control) {
  g.validate();
  ode::OdeSystem sys;
  sys.dim = 2;
  sys.names = {"x_O", "x_N"};
  sys.rhs = [g, control](double, std::span<const double> x, std::span<double> dx) {
    const double x_O = x[0], x_N = x[1];
    const double input =
        control == GrnControl::open ? g.u_i : g.G * (g.x_star - x_O);
    dx[0] = g.H_O(x_O, x_N) - g.gamma * x_O + input;
    dx[1] = g.H_N(x_O, x_N) - g.gamma * x_N;
  };
  return sys;
}

EnvelopeBand highgain_envelope(double t, double G, double gamma, double x_star,
                               double D) {
  if (G < 0.0 || gamma < 0.0 || D < 0.0)
    throw std::invalid_argument("G, gamma and D must be nonnegative");
  const double rate = gamma + G;
  const double rise = 1.0 - std::exp(-rate * t);
  return {G * x_star / rate * rise, (D + G * x_star) / rate * rise};
}

}  // namespace biocircuit::models
