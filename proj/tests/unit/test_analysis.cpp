#include <doctest.h>

#include <cmath>
#include <vector>

#include "biocircuit/analysis/adaptation.hpp"
#include "biocircuit/analysis/bifurcation.hpp"
#include "biocircuit/analysis/hidden_integral.hpp"
#include "biocircuit/models/ffwd.hpp"
#include "biocircuit/models/plant.hpp"
#include "biocircuit/models/qic.hpp"
#include "biocircuit/models/reference.hpp"
#include "biocircuit/ode/integrator.hpp"

using namespace biocircuit;
using namespace biocircuit::analysis;
using namespace biocircuit::models;

namespace {

// scalar fold-pair family: dx/dt = u + x - x^3
std::function<ode::OdeSystem(double)> cubic_family() {
  return [](double u) {
    ode::OdeSystem sys;
    sys.dim = 1;
    sys.names = {"x"};
    sys.rhs = [u](double, std::span<const double> x, std::span<double> dx) {
      dx[0] = u + x[0] - x[0] * x[0] * x[0];
    };
    return sys;
  };
}

DisturbedFamily ffwd_family(double g, double delta) {
  FfwdParams f;
  f.g = g;
  f.delta = delta;
  DisturbedFamily fam;
  fam.build = [f](double d1, double d2, double) {
    DisturbanceInputs dist;
    dist.d1 = Schedule::constant(d1);
    dist.d2 = Schedule::constant(d2);
    return build_ffwd(f, dist);
  };
  fam.steady_output = [f](double d1, double d2, double) {
    return ffwd_steady_state(f, d1, d2).X;
  };
  fam.x0 = {0.0, 0.0, 0.0, 0.0};
  return fam;
}

}  // namespace

TEST_CASE("fold pair of the cubic family") {
  std::vector<double> grid;
  for (int i = 0; i <= 32; ++i) grid.push_back(0.8 * i / 32.0);
  const ode::Box box{{-2.0}, {2.0}};
  const BifurcationDiagram diagram =
      bifurcation_sweep(cubic_family(), "u", grid, box, 24);

  CHECK(diagram.stable_counts.front() == 2);
  CHECK(diagram.stable_counts.back() == 1);
  REQUIRE(diagram.detected_events.size() == 1);
  const double fold = 2.0 / (3.0 * std::sqrt(3.0));
  CHECK(diagram.detected_events[0].first < fold);
  CHECK(diagram.detected_events[0].second > fold);

  // branches at u = 0: three equilibria, outer two stable
  REQUIRE(diagram.branches.front().size() == 3);
  CHECK(diagram.branches.front()[0].stability == ode::Stability::stable);
  CHECK(diagram.branches.front()[1].stability == ode::Stability::unstable);
  CHECK(diagram.branches.front()[2].stability == ode::Stability::stable);
}

TEST_CASE("branch continuity under nearest-neighbor matching") {
  FfwdParams f;
  f.g = 10.0;
  const auto family = [f](double d) {
    DisturbanceInputs dist;
    dist.d1 = Schedule::constant(d);
    return build_ffwd(f, dist);
  };
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(0.1 + (10.0 - 0.1) * i / 20.0);
  const ode::Box box{{0.0, 0.0, 0.0, 0.0}, {15.0, 15.0, 2.0, 2.0}};
  const BifurcationDiagram diagram = bifurcation_sweep(family, "d", grid, box, 12);

  CHECK(diagram.branch_count == 1);
  CHECK(diagram.detected_events.empty());
  const double slope_bound = 50.0;
  for (std::size_t k = 0; k + 1 < diagram.grid.size(); ++k) {
    const double du = diagram.grid[k + 1] - diagram.grid[k];
    double jump = 0.0;
    for (int i = 0; i < 4; ++i)
      jump = std::max(jump, std::abs(diagram.branches[k + 1][0].point[static_cast<std::size_t>(i)] -
                                     diagram.branches[k][0].point[static_cast<std::size_t>(i)]));
    CHECK(jump <= 10.0 * du * slope_bound);
  }

  // the X branch rises monotonically toward beta*alpha/(gamma*theta)
  const double limit = f.beta * f.alpha / (f.gamma * f.theta());
  double prev = -1.0;
  for (std::size_t k = 0; k < diagram.grid.size(); ++k) {
    const double X = diagram.branches[k][0].point[3];
    CHECK(X > prev);
    CHECK(X < limit);
    prev = X;
  }
}

TEST_CASE("perfect adaptation gives a rejection index of exactly zero") {
  const double grid[] = {0.25, 0.5, 1.0, 2.0, 4.0};
  const AdaptationCurve curve =
      adaptation_curve(ffwd_family(3.0, 0.0), grid, DisturbanceChannel::d);
  CHECK(curve.rejection_index == 0.0);
}

TEST_CASE("unregulated two-stage module has rejection index 1.5") {
  const PlantParams p;
  DisturbedFamily fam;
  fam.build = [p](double d1, double d2, double H) {
    DisturbanceInputs dist;
    dist.d1 = Schedule::constant(d1);
    dist.d2 = Schedule::constant(d2);
    dist.H_GRN = Schedule::constant(H);
    return build_plant(p, dist);
  };
  fam.steady_output = [p](double d1, double d2, double H) {
    return plant_steady_state(p, d1, d2, H)[1];
  };
  const double grid[] = {0.5, 1.0, 2.0};
  const AdaptationCurve curve =
      adaptation_curve(fam, grid, DisturbanceChannel::d1);
  CHECK(curve.rejection_index == 1.5);
}

TEST_CASE("simulated curve agrees with the closed form to 1e-6") {
  const double grid[] = {0.5, 1.0, 2.0};
  const DisturbedFamily fam = ffwd_family(10.0, 1.0);
  const AdaptationCurve closed =
      adaptation_curve(fam, grid, DisturbanceChannel::d, SteadyMethod::closed_form);
  ode::IntegratorConfig cfg;
  cfg.rtol = 1e-10;
  cfg.atol = 1e-12;
  cfg.t_max = 300.0;
  const AdaptationCurve simulated =
      adaptation_curve(fam, grid, DisturbanceChannel::d, SteadyMethod::simulate, cfg);
  for (std::size_t i = 0; i < closed.outputs.size(); ++i)
    CHECK(std::abs(simulated.outputs[i] - closed.outputs[i]) /
              std::max(1.0, closed.outputs[i]) <=
          1e-6);
}

TEST_CASE("closed loop rejects the transcriptional channel ten times better") {
  const QicParams q = reference_qic();
  const PlantParams p = reference_plant();
  const double grid[] = {0.5, 1.0, 2.0};

  auto loop_family = [&](QicLoop loop, double w_open) {
    QicParams qq = q;
    qq.w_open = w_open;
    DisturbedFamily fam;
    fam.build = [qq, p, loop](double d1, double d2, double H) {
      DisturbanceInputs dist;
      dist.d1 = Schedule::constant(d1);
      dist.d2 = Schedule::constant(d2);
      dist.H_GRN = Schedule::constant(H);
      return build_qic(qq, p, dist, loop);
    };
    fam.x0 = {0.0, 0.0, 0.0};
    fam.output_coord = 1;
    return fam;
  };

  ode::IntegratorConfig cfg;
  cfg.rtol = 1e-10;
  cfg.atol = 1e-12;
  cfg.ss_tol = 1e-8;
  cfg.t_max = 500.0;
  const double w_open = calibrate_w_open(q, p);
  const AdaptationCurve closed = adaptation_curve(
      loop_family(QicLoop::closed, 0.0), grid, DisturbanceChannel::d1,
      SteadyMethod::simulate, cfg);
  const AdaptationCurve open = adaptation_curve(
      loop_family(QicLoop::open, w_open), grid, DisturbanceChannel::d1,
      SteadyMethod::simulate, cfg);
  CHECK(closed.rejection_index <= 0.1 * open.rejection_index);
}

TEST_CASE("no-convergence reports the offending grid value") {
  DisturbedFamily fam;
  fam.build = [](double d1, double, double) {
    ode::OdeSystem sys;
    sys.dim = 2;
    sys.names = {"x", "y"};
    sys.rhs = [d1](double, std::span<const double> x, std::span<double> dx) {
      const double r2 = x[0] * x[0] + x[1] * x[1];
      dx[0] = x[0] * (d1 - r2) - x[1];
      dx[1] = x[1] * (d1 - r2) + x[0];
    };
    return sys;
  };
  fam.x0 = {0.5, 0.0};
  const double grid[] = {1.0, 2.0};
  ode::IntegratorConfig cfg;
  cfg.t_max = 20.0;
  CHECK_THROWS_WITH_AS(
      adaptation_curve(fam, grid, DisturbanceChannel::d1, SteadyMethod::simulate, cfg),
      doctest::Contains("1"), NoConvergence);
}

TEST_CASE("memory variable obeys its governing equation") {
  FfwdParams f = reference_ffwd();
  f.delta = 0.0;
  DisturbanceInputs dist;
  dist.d1 = Schedule::constant(2.0);
  const ode::OdeSystem sys = build_ffwd(f, dist);

  ode::IntegratorConfig cfg;
  cfg.rtol = 1e-10;
  cfg.atol = 1e-12;
  cfg.sample_dt = 0.02;
  const std::vector<double> x0(4, 0.0);
  const ode::Trajectory traj = integrate(sys, x0, 0.0, 30.0, cfg);
  const HiddenIntegralTrace trace = hidden_integral_trace(traj, f, 2.0);

  CHECK(trace.v_ref == 1.0);
  CHECK(trace.max_residual <= 1e-3 * trace.max_dz_dt);

  // halving the sampling interval cuts the residual at least 3x
  ode::IntegratorConfig fine = cfg;
  fine.sample_dt = 0.01;
  const ode::Trajectory traj2 = integrate(sys, x0, 0.0, 30.0, fine);
  const HiddenIntegralTrace trace2 = hidden_integral_trace(traj2, f, 2.0);
  CHECK(trace2.max_residual * 3.0 <= trace.max_residual);

  // terminal mRNA sits at the disturbance-free reference
  const int im = traj.index_of("m");
  CHECK(std::abs(traj.value(traj.size() - 1, im) - trace.v_ref) <= 1e-6);
}

TEST_CASE("hidden integral trace input validation") {
  FfwdParams f = reference_ffwd();
  f.delta = 0.0;
  DisturbanceInputs dist;
  const ode::OdeSystem sys = build_ffwd(f, dist);
  ode::IntegratorConfig coarse;
  coarse.sample_dt = 3.0;
  const std::vector<double> x0(4, 0.0);
  const ode::Trajectory traj = integrate(sys, x0, 0.0, 30.0, coarse);
  CHECK_THROWS_AS(hidden_integral_trace(traj, f, 1.0), GridTooCoarse);

  // nonzero controller mRNA at t = 0 violates the derivation's premise
  ode::IntegratorConfig cfg;
  cfg.sample_dt = 0.02;
  const std::vector<double> bad0 = {0.5, 0.0, 0.0, 0.0};
  const ode::Trajectory bad = integrate(sys, bad0, 0.0, 5.0, cfg);
  CHECK_THROWS_AS(hidden_integral_trace(bad, f, 1.0), std::invalid_argument);
}
