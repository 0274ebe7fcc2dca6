#include "biocircuit/models/qic.hpp"

#include <cmath>
#include <stdexcept>

#include "biocircuit/ode/equilibria.hpp"
#include "biocircuit/ode/integrator.hpp"

namespace biocircuit::models {

double QicParams::activation(double u) const {
  const double un = std::pow(std::max(u, 0.0), n_act);
  const double kn = std::pow(K_act, n_act);
  return a_act * un / (un + kn);
}

double QicParams::activation_inverse(double target) const {
  if (!(target > 0.0) || !(target < a_act))
    throw std::invalid_argument("activation target must lie in (0, a_act)");
  return K_act * std::pow(target / (a_act - target), 1.0 / n_act);
}

void QicParams::validate() const {
  for (double x : {k1, k2, K1, K2, gamma_u, v, K_act, a_act, n_act})
    if (!(x > 0.0) || !std::isfinite(x))
      throw std::invalid_argument("QIC parameters must be strictly positive and finite");
  if (u_tot < 0.0 || w_open < 0.0)
    throw std::invalid_argument("u_tot and w_open must be nonnegative");
}

double mm_cycle_rate(const QicParams& q, double u0, double u, double w) {
  if (u0 < 0.0 || u < 0.0 || w < 0.0)
    throw std::invalid_argument("mm_cycle_rate requires nonnegative concentrations");
  return q.k1 * q.v * u0 / (u0 + q.K1) - q.k2 * w * u / (u + q.K2) - q.gamma_u * u;
}

double qic_ideal_controller_rate(const QicParams& q, double w, double u) {
  return q.k1 * q.v - q.k2 * w - q.gamma_u * u;
}

ode::OdeSystem build_qic(const QicParams& q_in, const PlantParams& p,
                         const DisturbanceInputs& dist, QicLoop loop) {
  QicParams q = q_in;
  q.validate();
  p.validate();
  dist.validate();
  if (loop == QicLoop::open && q.w_open == 0.0)
    q.w_open = calibrate_w_open(q, p, dist.d1.value(0.0), dist.d2.value(0.0),
                                dist.H_GRN.value(0.0), dist.r.value(0.0));

  ode::OdeSystem sys;
  sys.dim = 3;
  sys.names = {"m", "X", "u"};
  sys.breakpoints = dist.breakpoints();
  const double u_tot = q.u_total();
  sys.rhs = [q, p, dist, loop, u_tot](double t, std::span<const double> x,
                                      std::span<double> dx) {
    const double m = x[0], X = x[1], u = x[2];
    dx[0] = q.activation(u) * p.R_TX * dist.d1.value(t) - p.delta * m +
            dist.H_GRN.value(t);
    dx[1] = p.beta * p.R_TL * dist.d2.value(t) * m - p.gamma * X + dist.r.value(t);
    const double w = loop == QicLoop::closed ? std::max(X, 0.0) : q.w_open;
    const double u0 = std::max(u_tot - u, 0.0);
    dx[2] = q.k1 * q.v * u0 / (u0 + q.K1) - q.k2 * w * u / (u + q.K2) - q.gamma_u * u;
  };
  return sys;
}

double calibrate_w_open(const QicParams& q, const PlantParams& p, double d1_nominal,
                        double d2_nominal, double H_nominal, double r_nominal) {
  DisturbanceInputs nominal;
  nominal.d1 = Schedule::constant(d1_nominal);
  nominal.d2 = Schedule::constant(d2_nominal);
  nominal.H_GRN = Schedule::constant(H_nominal);
  nominal.r = Schedule::constant(r_nominal);
  const ode::OdeSystem closed = build_qic(q, p, nominal, QicLoop::closed);

  ode::IntegratorConfig cfg;
  cfg.ss_tol = 1e-7;
  cfg.t_max = 2000.0;
  const std::vector<double> x0(3, 0.0);
  const ode::SteadyStateResult sim = simulate_to_steady_state(closed, x0, cfg);
  const ode::NewtonResult polished = newton_refine(closed, sim.trajectory.back_state());
  if (!polished.converged)
    throw std::runtime_error("open-loop calibration failed: closed loop did not settle");
  return polished.point[1];  // steady X
}

double zero_order_violation_fraction(const ode::Trajectory& traj, const QicParams& q) {
  const int iu = traj.index_of("u");
  const double u_tot = q.u_total();
  if (traj.size() < 2) return 0.0;
  double bad_time = 0.0;
  for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
    const double u = traj.value(i, iu);
    if (u_tot - u < 10.0 * q.K1 || u < 10.0 * q.K2)
      bad_time += traj.times[i + 1] - traj.times[i];
  }
  return bad_time / (traj.times.back() - traj.times.front());
}

}  // namespace biocircuit::models
