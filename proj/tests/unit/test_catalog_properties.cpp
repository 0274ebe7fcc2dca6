// Cross-cutting properties of the model catalog: closed forms agree with
// simulation, the steady-state reached by time marching is one of the
// finder's stable equilibria, and independent integrations are thread-safe.
#include <doctest.h>

#include <cmath>
#include <thread>
#include <vector>

#include "biocircuit/analysis/rng.hpp"
#include "biocircuit/models/ffwd.hpp"
#include "biocircuit/models/plant.hpp"
#include "biocircuit/models/reference.hpp"
#include "biocircuit/models/repro.hpp"
#include "biocircuit/ode/equilibria.hpp"
#include "biocircuit/ode/integrator.hpp"

using namespace biocircuit;
using namespace biocircuit::models;

namespace {

double rel_gap(std::span<const double> a, std::span<const double> b) {
  double num = 0.0, den = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max({den, std::abs(a[i]), std::abs(b[i])});
  }
  return num / den;
}

ode::IntegratorConfig settle_cfg() {
  ode::IntegratorConfig cfg;
  cfg.rtol = 1e-10;
  cfg.atol = 1e-12;
  cfg.t_max = 600.0;
  return cfg;
}

double draw(std::uint64_t seed, std::uint64_t i) {
  return analysis::stream_lognormal(seed, i, 0.4);
}

}  // namespace

TEST_CASE("closed forms match simulated equilibria over 50 draws per model") {
  std::size_t plant_checked = 0, ffwd_checked = 0, repro_checked = 0;

  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    // two-stage module
    {
      PlantParams p;
      p.alpha = draw(trial * 3 + 1, 0);
      p.beta = draw(trial * 3 + 1, 1);
      p.delta = draw(trial * 3 + 1, 2);
      p.gamma = draw(trial * 3 + 1, 3);
      const double H = draw(trial * 3 + 1, 4);
      DisturbanceInputs dist;
      dist.H_GRN = Schedule::constant(H);
      const auto expected = plant_steady_state(p, 1.0, 1.0, H);
      const auto res = simulate_to_steady_state(
          build_plant(p, dist), std::vector<double>{0.0, 0.0}, settle_cfg());
      REQUIRE(res.converged);
      CHECK(rel_gap(res.equilibrium.point, expected) <= 1e-6);
      ++plant_checked;
    }
    // feedforward, alternating variants
    {
      FfwdParams f;
      f.variant = trial % 2 ? FfwdVariant::microrna : FfwdVariant::ern;
      double* fields[] = {&f.alpha_bar, &f.delta_bar, &f.beta_bar, &f.gamma_bar,
                          &f.g,         &f.alpha,     &f.beta,     &f.delta,
                          &f.gamma};
      for (std::uint64_t i = 0; i < 9; ++i) *fields[i] = draw(trial * 3 + 2, i);
      const FfwdSteady s = ffwd_steady_state(f, 1.0, 1.0);
      std::vector<double> expected =
          f.variant == FfwdVariant::ern
              ? std::vector<double>{s.m_E.value(), s.controller, s.m, s.X}
              : std::vector<double>{s.controller, s.m, s.X};
      const ode::OdeSystem sys = build_ffwd(f, DisturbanceInputs{});
      const std::vector<double> x0(static_cast<std::size_t>(sys.dim), 0.0);
      const auto res = simulate_to_steady_state(sys, x0, settle_cfg());
      REQUIRE(res.converged);
      CHECK(rel_gap(res.equilibrium.point, expected) <= 1e-6);
      ++ffwd_checked;
    }
    // overexpression construct
    {
      ReproParams r;
      double* fields[] = {&r.alpha, &r.beta, &r.c,     &r.delta, &r.delta_bar,
                          &r.kappa, &r.gamma, &r.d};
      for (std::uint64_t i = 0; i < 8; ++i) *fields[i] = draw(trial * 3 + 3, i);
      r.G = 1.0 + 20.0 * analysis::stream_uniform(trial * 3 + 3, 30);
      const double H = analysis::stream_uniform(trial * 3 + 3, 31);
      const ReproSteady s = repro_steady_state(r, H);
      const std::vector<double> expected = {s.m_i, s.mu, s.x_i};
      const auto res = simulate_to_steady_state(build_repro(r, Schedule::constant(H)),
                                                std::vector<double>{0.0, 0.0, 0.0},
                                                settle_cfg());
      REQUIRE(res.converged);
      CHECK(rel_gap(res.equilibrium.point, expected) <= 1e-6);
      ++repro_checked;
    }
  }
  CHECK(plant_checked == 50);
  CHECK(ffwd_checked == 50);
  CHECK(repro_checked == 50);
}

TEST_CASE("time marching lands on a stable equilibrium of the finder") {
  struct Case {
    const char* name;
    ode::OdeSystem system;
    std::vector<double> x0;
    ode::Box box;
  };
  std::vector<Case> cases;

  {
    DisturbanceInputs dist;
    dist.H_GRN = Schedule::constant(0.5);
    cases.push_back({"plant", build_plant(PlantParams{}, dist), {0.0, 0.0},
                     {{0.0, 0.0}, {5.0, 5.0}}});
  }
  {
    const QicParams q = reference_qic();
    const PlantParams p = reference_plant();
    cases.push_back({"qic_closed",
                     build_qic(q, p, DisturbanceInputs{}, QicLoop::closed),
                     {0.0, 0.0, 0.0},
                     {{0.0, 0.0, 0.0}, {5.0, 5.0, 300.0}}});
  }
  {
    FfwdParams f = reference_ffwd();
    f.g = 10.0;
    cases.push_back({"ffwd_ern", build_ffwd(f, DisturbanceInputs{}),
                     {0.0, 0.0, 0.0, 0.0},
                     {{0.0, 0.0, 0.0, 0.0}, {3.0, 3.0, 3.0, 3.0}}});
  }
  {
    const GrnParams g = reference_grn();
    const GrnReferenceMeta meta = grn_reference_meta();
    cases.push_back({"grn", build_grn(g, GrnControl::open),
                     {meta.somatic[0], meta.somatic[1]}, meta.box});
  }
  {
    const ReproParams r = reference_repro();
    cases.push_back({"repro", build_repro(r, Schedule::constant(1.0)),
                     {0.0, 0.0, 0.0},
                     {{0.0, 0.0, 0.0}, {3.0, 100.0, 3.0}}});
  }

  for (const Case& c : cases) {
    CAPTURE(c.name);
    const auto res = simulate_to_steady_state(c.system, c.x0, settle_cfg());
    REQUIRE(res.converged);
    const auto eqs = find_equilibria(c.system, c.box, 48);
    double best = 1e300;
    for (const auto& e : eqs) {
      if (e.stability != ode::Stability::stable) continue;
      best = std::min(best, rel_gap(res.equilibrium.point, e.point));
    }
    CHECK(best <= 1e-6);
  }
}

TEST_CASE("independent integrations are safe to run concurrently") {
  const GrnParams g = reference_grn();
  const ode::OdeSystem sys = build_grn(g, GrnControl::open);
  ode::IntegratorConfig cfg;
  cfg.sample_dt = 0.05;

  const std::vector<std::vector<double>> starts = {
      {0.1, 0.1}, {1.0, 2.5}, {4.0, 2.5}, {0.5, 1.0}};
  std::vector<ode::Trajectory> serial(starts.size());
  for (std::size_t i = 0; i < starts.size(); ++i)
    serial[i] = integrate(sys, starts[i], 0.0, 20.0, cfg);

  std::vector<ode::Trajectory> parallel(starts.size());
  std::vector<std::thread> workers;
  for (std::size_t i = 0; i < starts.size(); ++i)
    workers.emplace_back([&, i] { parallel[i] = integrate(sys, starts[i], 0.0, 20.0, cfg); });
  for (auto& w : workers) w.join();

  for (std::size_t i = 0; i < starts.size(); ++i) {
    CHECK(serial[i].times == parallel[i].times);
    CHECK(serial[i].data == parallel[i].data);
  }
}

TEST_CASE("activation input map is strictly increasing") {
  const QicParams q = reference_qic();
  double prev = q.activation(1e-9);
  for (double u = 0.01; u < 50.0; u *= 1.45) {
    const double a = q.activation(u);
    CHECK(a > prev);
    prev = a;
  }
  CHECK(q.activation(q.activation_inverse(1.0)) == doctest::Approx(1.0).epsilon(1e-12));
}
