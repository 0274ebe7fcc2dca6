#include <doctest.h>

#include <cmath>
#include <vector>

#include "biocircuit/analysis/rng.hpp"
#include "biocircuit/models/reference.hpp"
#include "biocircuit/models/repro.hpp"
#include "biocircuit/ode/equilibria.hpp"
#include "biocircuit/ode/integrator.hpp"

using namespace biocircuit;
using namespace biocircuit::models;

namespace {

ReproParams unit_params(double G) {
  ReproParams r;
  r.G = G;
  r.alpha = r.beta = r.c = r.delta = r.delta_bar = r.kappa = r.gamma = r.d = 1.0;
  return r;
}

}  // namespace

TEST_CASE("closed-form steady states") {
  SUBCASE("no endogenous drive") {
    const ReproSteady s = repro_steady_state(unit_params(5.0), 0.0);
    CHECK(s.m_i == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
    CHECK(s.x_i == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
    CHECK(s.mu == 5.0);
  }
  SUBCASE("drive plus gain of 100") {
    const ReproSteady s = repro_steady_state(unit_params(100.0), 1.0);
    CHECK(s.m_i == 1.0);
    CHECK(s.x_i == 1.0);
    CHECK(s.m_bound == doctest::Approx(0.01).epsilon(1e-15));
  }
}

TEST_CASE("copy-number doubling barely moves the output at high gain") {
  ReproParams r = unit_params(1000.0);
  const double m1 = repro_steady_state(r, 5.0).m_i;
  r.d = 2.0;
  const double m2 = repro_steady_state(r, 5.0).m_i;
  const double rel = std::abs(m2 - m1) / m1;
  CHECK(rel <= 0.0051);
  CHECK(rel >= 0.001);
}

TEST_CASE("the protein limit carries the decay factor") {
  ReproParams r = unit_params(10.0);
  r.gamma = 2.0;
  CHECK(r.m_limit() == 1.0);
  CHECK(r.x_limit() == 0.5);
  const ReproSteady s = repro_steady_state(r, 0.0);
  CHECK(s.x_limit == 0.5);
}

TEST_CASE("closed form equals the equilibrium finder over random draws") {
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    ReproParams r;
    double* fields[] = {&r.alpha, &r.beta, &r.c,     &r.delta, &r.delta_bar,
                        &r.kappa, &r.gamma, &r.d};
    for (std::uint64_t i = 0; i < 8; ++i)
      *fields[i] = analysis::stream_lognormal(trial * 977 + 3, i, 0.4);
    r.G = 1.0 + 30.0 * analysis::stream_uniform(trial * 977 + 3, 50);
    const double H = analysis::stream_uniform(trial * 977 + 3, 51);

    const ReproSteady s = repro_steady_state(r, H);
    const ode::OdeSystem sys = build_repro(r, Schedule::constant(H));
    ode::Box box{{0.0, 0.0, 0.0},
                 {2.0 * s.m_i + 1.0, 2.0 * s.mu + 1.0, 2.0 * s.x_i + 1.0}};
    const auto eqs = find_equilibria(sys, box, 12);
    REQUIRE(eqs.size() == 1);
    CHECK(eqs[0].stability == ode::Stability::stable);
    const double expect[] = {s.m_i, s.mu, s.x_i};
    for (int i = 0; i < 3; ++i) {
      const double scale = std::max(1.0, std::abs(expect[i]));
      CHECK(std::abs(eqs[0].point[i] - expect[i]) / scale <= 1e-8);
    }
  }
}

TEST_CASE("terminal offset shrinks with the gain under a varying drive") {
  const Schedule drive({{0.0, 2.0}, {10.0, 3.5}, {20.0, 1.5}});
  auto terminal_offset = [&](double G) {
    const ReproParams r = unit_params(G);
    const ode::OdeSystem sys = build_repro(r, drive);
    const ode::Trajectory traj =
        integrate(sys, std::vector<double>{0.0, 0.0, 0.0}, 0.0, 40.0, {});
    return std::abs(traj.back_state()[2] - r.x_limit());
  };
  const double off100 = terminal_offset(100.0);
  const double off1000 = terminal_offset(1000.0);
  CHECK(off1000 * 8.0 <= off100);
  // and the offsets respect the residual bound at the terminal drive level
  CHECK(off100 <= unit_params(100.0).x_residual_bound(3.5));
}

TEST_CASE("released coupled system reduces to the bare network") {
  const ReproParams r = reference_repro();
  const GrnParams grn = reference_grn();
  const GrnReferenceMeta meta = grn_reference_meta();
  const ode::OdeSystem bare = build_grn(grn, GrnControl::open);
  const auto eqs = find_equilibria(bare, meta.box, meta.n_starts);
  const ode::OdeSystem released = build_repro_coupled_released(r, grn);
  for (const auto& e : eqs) {
    if (e.stability != ode::Stability::stable) continue;
    // kappa = delta: the lifted state (H_O/delta, 0, x_O, x_N) is a fixed point
    const std::vector<double> lifted = {grn.H_O(e.point[0], e.point[1]) / r.delta,
                                        0.0, e.point[0], e.point[1]};
    CHECK(released.residual_inf(0.0, lifted) <= 1e-8);
  }
}

TEST_CASE("nonnegativity across the catalog under random drives") {
  for (std::uint64_t trial = 0; trial < 6; ++trial) {
    ReproParams r = unit_params(10.0 + 100.0 * analysis::stream_uniform(trial, 0));
    const Schedule drive({{0.0, 2.0 * analysis::stream_uniform(trial, 1)},
                          {3.0, 4.0 * analysis::stream_uniform(trial, 2)}});
    ode::IntegratorConfig cfg;
    cfg.sample_dt = 0.05;
    const ode::Trajectory traj = integrate(build_repro(r, drive),
                                           std::vector<double>{0.0, 0.0, 0.0},
                                           0.0, 10.0, cfg);
    for (std::size_t i = 0; i < traj.size(); ++i)
      for (int j = 0; j < 3; ++j) CHECK(traj.value(i, j) >= -cfg.atol);
  }
}

TEST_CASE("parameter validation") {
  ReproParams r;
  r.c = 0.0;
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);
  CHECK_THROWS_AS(repro_steady_state(ReproParams{}, -1.0), std::invalid_argument);
}
