#include "biocircuit/ode/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "biocircuit/ode/equilibria.hpp"
#include "detail.hpp"

namespace biocircuit::ode {
namespace {

// Dormand-Prince 5(4) tableau. The seventh stage is FSAL.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                 a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// 5th-order weights minus the embedded 4th-order weights.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

constexpr std::uint8_t kStopSample = 1;
constexpr std::uint8_t kStopBreak = 2;
constexpr std::uint8_t kStopEnd = 4;

struct Stop {
  double t;
  std::uint8_t flags;
};

bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

std::vector<Stop> build_stops(const OdeSystem& system, double t0, double t1,
                              double sample_dt) {
  std::vector<Stop> stops;
  const double span = t1 - t0;
  // b == t1 still needs the stage clipping of the landing step
  for (double b : system.breakpoints)
    if (b > t0 && b <= t1) stops.push_back({b, kStopBreak});
  if (sample_dt > 0.0) {
    const auto n = static_cast<std::size_t>(std::floor(span / sample_dt + 1e-9));
    for (std::size_t k = 1; k <= n; ++k) {
      double ts = t0 + static_cast<double>(k) * sample_dt;
      if (ts < t1) stops.push_back({ts, kStopSample});
    }
  }
  stops.push_back({t1, static_cast<std::uint8_t>(kStopEnd | (sample_dt > 0.0 ? kStopSample : 0))});
  std::sort(stops.begin(), stops.end(),
            [](const Stop& a, const Stop& b) { return a.t < b.t; });
  // merge stops closer than roundoff so the loop cannot stall
  std::vector<Stop> merged;
  const double tol = 1e-12 * std::max(1.0, std::abs(t0) + std::abs(t1));
  for (const Stop& s : stops) {
    if (!merged.empty() && s.t - merged.back().t <= tol) {
      merged.back().flags |= s.flags;
      merged.back().t = std::max(merged.back().t, s.t);
    } else {
      merged.push_back(s);
    }
  }
  merged.back().t = t1;
  return merged;
}

class Dopri5 {
 public:
  Dopri5(const OdeSystem& system, const IntegratorConfig& cfg, double t0, double t1)
      : sys_(system),
        cfg_(cfg),
        t0_(t0),
        t1_(t1),
        n_(static_cast<std::size_t>(system.dim)),
        stops_(build_stops(system, t0, t1, cfg.sample_dt)) {
    for (auto& k : k_) k.resize(n_);
    y_stage_.resize(n_);
    y_new_.resize(n_);
    h_max_ = cfg.h_max > 0.0 ? cfg.h_max : (t1 - t0);
  }

  // Returns the trajectory; `steady` (optional) receives ‖f‖∞ after each
  // accepted step and may end the run early by returning true.
  template <typename SteadyCheck>
  Trajectory run(std::span<const double> x0, SteadyCheck&& steady, double* t_end) {
    if (static_cast<std::size_t>(sys_.dim) != x0.size())
      throw std::invalid_argument("initial state length does not match system dimension");
    if (!(t1_ > t0_)) throw std::invalid_argument("t1 must exceed t0");
    if (!all_finite(x0)) throw NonFiniteState("initial state is not finite");
    cfg_.validate();

    std::vector<double> y(x0.begin(), x0.end());
    for (double v : y) x0_norm_ = std::max(x0_norm_, std::abs(v));
    double t = t0_;
    std::size_t next_stop = 0;

    Trajectory traj;
    traj.dim = sys_.dim;
    traj.names = sys_.names;
    record(traj, t, y);

    sys_.rhs(t, y, k_[0]);
    double h = initial_step(t, y);
    double errold = 1e-4;
    bool fsal_valid = true;
    bool last_reject_nonfinite = false;
    std::uint64_t n_steps = 0;

    while (t < t1_) {
      if (++n_steps > kMaxSteps)
        throw StepSizeUnderflow("step budget exhausted before reaching t1");
      const Stop& stop = stops_[next_stop];
      bool hit_stop = false;
      if (t + h >= stop.t - 1e-14 * std::max(1.0, std::abs(stop.t))) {
        h = stop.t - t;
        hit_stop = true;
      }
      if (h <= min_step(t)) {
        if (hit_stop && stop.t - t >= 0.0) {
          // snap across a sub-roundoff gap
          t = stop.t;
          if (!handle_stop(traj, t, y, stop, next_stop, fsal_valid)) break;
          continue;
        }
        if (last_reject_nonfinite) throw NonFiniteState("state became non-finite");
        double ynorm = 0.0;
        for (double v : y) ynorm = std::max(ynorm, std::abs(v));
        if (ynorm > 1e6 * (1.0 + x0_norm_))
          throw NonFiniteState("state grew without bound (blow-up)");
        throw StepSizeUnderflow("step size underflow");
      }

      // stage times never read input values past a breakpoint landing
      const double t_clip = (hit_stop && (stop.flags & kStopBreak))
                                ? std::nextafter(stop.t, t)
                                : std::numeric_limits<double>::infinity();
      if (!fsal_valid) {
        sys_.rhs(t, y, k_[0]);
        fsal_valid = true;
      }
      const double err = step(t, y, h, t_clip);

      if (!std::isfinite(err)) {
        last_reject_nonfinite = true;
        h *= 0.5;
        continue;
      }
      if (err > 1.0) {
        last_reject_nonfinite = false;
        const double fac = std::min(5.0, std::pow(err, 0.2) / 0.9);
        h /= fac;
        continue;
      }

      // accepted
      last_reject_nonfinite = false;
      errold = std::max(err, 1e-4);
      const double t_new = hit_stop ? stop.t : t + h;
      y.swap(y_new_);
      k_[0].swap(k_[6]);  // FSAL
      t = t_new;
      if (!all_finite(y)) throw NonFiniteState("state became non-finite");

      const bool record_this =
          cfg_.sample_dt > 0.0 ? (hit_stop && (stop.flags & kStopSample)) : true;
      if (record_this) record(traj, t, y);

      double fnorm = 0.0;
      for (double v : k_[0]) fnorm = std::max(fnorm, std::abs(v));
      if (steady(t, fnorm)) {
        if (!record_this) record(traj, t, y);
        if (t_end) *t_end = t;
        return traj;
      }

      if (hit_stop) {
        if (stop.flags & kStopBreak) fsal_valid = false;  // new input segment
        if (!record_this && (stop.flags & kStopEnd)) record(traj, t, y);
        ++next_stop;
        if (stop.flags & kStopEnd) break;
      }

      // PI controller (accepted branch)
      const double fac11 = std::pow(err, 0.17);
      double fac = fac11 / std::pow(errold, 0.04);
      fac = std::max(0.1, std::min(5.0, fac / 0.9));
      // near a fixed point, growing h past the contractive zone would keep
      // kicking the iterate off the equilibrium; hold h once ‖f‖ approaches
      // the detection threshold
      if (steady_mode_ && fnorm < 1e3 * cfg_.ss_tol) fac = std::max(fac, 1.0);
      h = std::min(h / fac, h_max_);
    }

    if (t_end) *t_end = t;
    return traj;
  }

 private:
  static constexpr std::uint64_t kMaxSteps = 20'000'000;

  double min_step(double t) const { return 1e-14 * std::max(1.0, std::abs(t)); }

  void record(Trajectory& traj, double t, std::span<const double> y) const {
    if (!traj.times.empty() && traj.times.back() == t) return;
    traj.times.push_back(t);
    traj.data.insert(traj.data.end(), y.begin(), y.end());
  }

  bool handle_stop(Trajectory& traj, double t, std::span<const double> y,
                   const Stop& stop, std::size_t& next_stop, bool& fsal_valid) {
    if (stop.flags & kStopSample) record(traj, t, y);
    if (stop.flags & kStopBreak) fsal_valid = false;
    if (stop.flags & kStopEnd) {
      record(traj, t, y);
      return false;
    }
    ++next_stop;
    return true;
  }

  double scaled_error_norm(std::span<const double> y, std::span<const double> y_new,
                           std::span<const double> err_vec) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double sc = cfg_.atol + cfg_.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      const double q = err_vec[i] / sc;
      acc += q * q;
    }
    return std::sqrt(acc / static_cast<double>(n_));
  }

  // One trial step from (t, y) with size h. k_[0] must hold f(t, y).
  // On return y_new_ holds the candidate state and k_[6] holds f(t+h, y_new).
  double step(double t, std::span<const double> y, double h, double t_clip) {
    auto stage_time = [&](double ts) { return std::min(ts, t_clip); };
    for (std::size_t i = 0; i < n_; ++i)
      y_stage_[i] = y[i] + h * a21 * k_[0][i];
    sys_.rhs(stage_time(t + c2 * h), y_stage_, k_[1]);
    for (std::size_t i = 0; i < n_; ++i)
      y_stage_[i] = y[i] + h * (a31 * k_[0][i] + a32 * k_[1][i]);
    sys_.rhs(stage_time(t + c3 * h), y_stage_, k_[2]);
    for (std::size_t i = 0; i < n_; ++i)
      y_stage_[i] = y[i] + h * (a41 * k_[0][i] + a42 * k_[1][i] + a43 * k_[2][i]);
    sys_.rhs(stage_time(t + c4 * h), y_stage_, k_[3]);
    for (std::size_t i = 0; i < n_; ++i)
      y_stage_[i] = y[i] + h * (a51 * k_[0][i] + a52 * k_[1][i] + a53 * k_[2][i] +
                                a54 * k_[3][i]);
    sys_.rhs(stage_time(t + c5 * h), y_stage_, k_[4]);
    for (std::size_t i = 0; i < n_; ++i)
      y_stage_[i] = y[i] + h * (a61 * k_[0][i] + a62 * k_[1][i] + a63 * k_[2][i] +
                                a64 * k_[3][i] + a65 * k_[4][i]);
    sys_.rhs(stage_time(t + h), y_stage_, k_[5]);
    for (std::size_t i = 0; i < n_; ++i)
      y_new_[i] = y[i] + h * (b1 * k_[0][i] + b3 * k_[2][i] + b4 * k_[3][i] +
                              b5 * k_[4][i] + b6 * k_[5][i]);
    sys_.rhs(stage_time(t + h), y_new_, k_[6]);

    double err_inf_guard = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double e = h * (e1 * k_[0][i] + e3 * k_[2][i] + e4 * k_[3][i] +
                            e5 * k_[4][i] + e6 * k_[5][i] + e7 * k_[6][i]);
      y_stage_[i] = e;  // reuse as error vector
      err_inf_guard = std::max(err_inf_guard, std::abs(e));
    }
    if (!all_finite(y_new_) || !std::isfinite(err_inf_guard))
      return std::numeric_limits<double>::quiet_NaN();
    return scaled_error_norm(y, y_new_, y_stage_);
  }

  double initial_step(double t, std::span<const double> y) {
    if (cfg_.h_init > 0.0) return std::min(cfg_.h_init, h_max_);
    double dnf = 0.0, dny = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double sc = cfg_.atol + cfg_.rtol * std::abs(y[i]);
      dnf += (k_[0][i] / sc) * (k_[0][i] / sc);
      dny += (y[i] / sc) * (y[i] / sc);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
    h = std::min(h, h_max_);
    for (std::size_t i = 0; i < n_; ++i) y_stage_[i] = y[i] + h * k_[0][i];
    sys_.rhs(t + h, y_stage_, k_[1]);
    double der2 = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double sc = cfg_.atol + cfg_.rtol * std::abs(y[i]);
      const double q = (k_[1][i] - k_[0][i]) / sc;
      der2 += q * q;
    }
    der2 = std::sqrt(der2) / h;
    const double der12 = std::max(std::sqrt(dnf), der2);
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3)
                                     : std::pow(0.01 / der12, 0.2);
    return std::min({100.0 * h, h1, h_max_});
  }

  const OdeSystem& sys_;
  IntegratorConfig cfg_;
  double t0_, t1_, h_max_;
  std::size_t n_;
  std::vector<Stop> stops_;
  std::vector<double> k_[7];
  std::vector<double> y_stage_, y_new_;
  double x0_norm_ = 0.0;

 public:
  bool steady_mode_ = false;
};

}  // namespace

Trajectory integrate(const OdeSystem& system, std::span<const double> x0,
                     double t0, double t1, const IntegratorConfig& config) {
  Dopri5 stepper(system, config, t0, t1);
  return stepper.run(x0, [](double, double) { return false; }, nullptr);
}

SteadyStateResult simulate_to_steady_state(const OdeSystem& system,
                                           std::span<const double> x0,
                                           const IntegratorConfig& config) {
  Dopri5 stepper(system, config, 0.0, config.t_max);
  stepper.steady_mode_ = true;
  int below = 0;
  bool settled = false;
  double t_end = 0.0;
  Trajectory traj = stepper.run(
      x0,
      [&](double, double fnorm) {
        below = fnorm < config.ss_tol ? below + 1 : 0;
        settled = below >= config.ss_window;
        return settled;
      },
      &t_end);

  SteadyStateResult result;
  result.trajectory = std::move(traj);
  result.converged = settled;
  const std::vector<double> terminal = result.trajectory.back_state();

  Equilibrium eq;
  eq.point = terminal;
  eq.residual = system.residual_inf(t_end, terminal);
  const std::vector<double> jac = finite_difference_jacobian(system, terminal, t_end);
  eq.eigen_real_parts = detail::eigen_real_parts(jac, system.dim);
  eq.stability = detail::classify_from_real_parts(eq.eigen_real_parts);
  result.equilibrium = std::move(eq);
  return result;
}

}  // namespace biocircuit::ode
