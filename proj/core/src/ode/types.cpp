#include "biocircuit/ode/types.hpp"

#include <cmath>
#include <stdexcept>

namespace biocircuit::ode {

std::vector<double> OdeSystem::eval(double t, std::span<const double> x) const {
  std::vector<double> dxdt(static_cast<std::size_t>(dim));
  rhs(t, x, dxdt);
  return dxdt;
}

double OdeSystem::residual_inf(double t, std::span<const double> x) const {
  std::vector<double> dxdt = eval(t, x);
  double r = 0.0;
  for (double v : dxdt) r = std::max(r, std::abs(v));
  return r;
}

int OdeSystem::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  throw std::out_of_range("no state coordinate named '" + name + "'");
}

void IntegratorConfig::validate() const {
  if (!(rtol > 0.0) || !(atol > 0.0))
    throw std::invalid_argument("integrator tolerances must be strictly positive");
  if (!(ss_tol > 0.0))
    throw std::invalid_argument("ss_tol must be strictly positive");
  if (ss_window < 1) throw std::invalid_argument("ss_window must be >= 1");
  if (h_init < 0.0 || h_max < 0.0 || sample_dt < 0.0)
    throw std::invalid_argument("step controls must be nonnegative");
  if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be strictly positive");
}

std::vector<double> Trajectory::back_state() const {
  auto s = state(size() - 1);
  return {s.begin(), s.end()};
}

std::vector<double> Trajectory::column(int coord) const {
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = value(i, coord);
  return out;
}

int Trajectory::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  throw std::out_of_range("no trajectory column named '" + name + "'");
}

std::string to_string(Stability s) {
  switch (s) {
    case Stability::stable: return "stable";
    case Stability::unstable: return "unstable";
    case Stability::marginal: return "marginal";
  }
  return "marginal";
}

}  // namespace biocircuit::ode
