#include <doctest.h>

#include <cmath>
#include <vector>

#include "biocircuit/analysis/rng.hpp"
#include "biocircuit/models/ffwd.hpp"
#include "biocircuit/ode/equilibria.hpp"
#include "biocircuit/ode/integrator.hpp"

using namespace biocircuit;
using namespace biocircuit::models;

namespace {

FfwdParams random_params(std::uint64_t trial, FfwdVariant variant) {
  FfwdParams f;
  f.variant = variant;
  double* fields[] = {&f.alpha_bar, &f.delta_bar, &f.beta_bar, &f.gamma_bar,
                      &f.g,         &f.alpha,     &f.beta,     &f.delta,
                      &f.gamma};
  for (std::uint64_t i = 0; i < 9; ++i)
    *fields[i] = analysis::stream_lognormal(trial * 131 + 17, i, 0.5);
  return f;
}

}  // namespace

TEST_CASE("effective feedforward strength") {
  FfwdParams f;
  f.g = 3.0;
  f.beta_bar = 2.0;
  f.alpha_bar = 5.0;
  f.gamma_bar = 4.0;
  f.delta_bar = 2.5;
  CHECK(f.theta() == doctest::Approx(3.0 * 10.0 / 10.0));
  f.variant = FfwdVariant::microrna;
  CHECK(f.theta() == doctest::Approx(3.0 * 5.0 / 2.5));
}

TEST_CASE("unit constants give X = 1/2") {
  const FfwdSteady s = ffwd_steady_state(FfwdParams{}, 1.0, 1.0);
  CHECK(s.X == 0.5);
  CHECK(s.m == 0.5);
  CHECK(s.controller == 1.0);
  CHECK(s.m_E.value() == 1.0);
}

TEST_CASE("large theta pins the output at beta*alpha/(gamma*theta)") {
  FfwdParams f;
  f.g = 100.0;
  const double X = ffwd_steady_state(f, 1.0, 1.0).X;
  const double limit = f.beta * f.alpha / (f.gamma * f.theta());
  CHECK(std::abs(X - limit) / limit <= 0.011);
}

TEST_CASE("perfect adaptation at delta = 0 is exact") {
  FfwdParams f;
  f.delta = 0.0;
  f.g = 3.7;  // arbitrary positive strength
  const double reference = ffwd_steady_state(f, 1.0, 1.0).X;
  for (double d : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    CHECK(ffwd_steady_state(f, d, 1.0).X == reference);
    CHECK(ffwd_steady_state(f, 1.0, d).X == reference);
    CHECK(ffwd_steady_state(f, d, 0.5).X == reference);
  }
}

TEST_CASE("microrna variant ignores translational disturbances") {
  FfwdParams f;
  f.variant = FfwdVariant::microrna;
  f.delta = 0.0;
  // transcriptional channel: fully compensated
  CHECK(ffwd_steady_state(f, 0.5, 1.0).X == ffwd_steady_state(f, 2.0, 1.0).X);
  // translational channel: passes straight through
  const double base = ffwd_steady_state(f, 1.0, 1.0).X;
  CHECK(ffwd_steady_state(f, 1.0, 0.5).X == 0.5 * base);
}

TEST_CASE("attenuation improves monotonically with theta") {
  const double d_grid[] = {0.5, 0.75, 1.0, 1.5, 2.0};
  double previous_spread = 1e300;
  for (double g : {1.0, 10.0, 100.0}) {
    FfwdParams f;
    f.g = g;
    double lo = 1e300, hi = -1e300, nominal = 0.0;
    for (double d : d_grid) {
      const double X = ffwd_steady_state(f, d, 1.0).X;
      lo = std::min(lo, X);
      hi = std::max(hi, X);
      if (d == 1.0) nominal = X;
    }
    const double spread = (hi - lo) / nominal;
    CHECK(spread < previous_spread);
    previous_spread = spread;
    if (g == 100.0) CHECK(spread <= 0.02);
  }
}

TEST_CASE("closed form equals the multi-start equilibrium finder") {
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const FfwdVariant variant =
        trial % 2 == 0 ? FfwdVariant::ern : FfwdVariant::microrna;
    const FfwdParams f = random_params(trial, variant);
    const FfwdSteady s = ffwd_steady_state(f, 1.0, 1.0);

    std::vector<double> expected;
    if (variant == FfwdVariant::ern)
      expected = {s.m_E.value(), s.controller, s.m, s.X};
    else
      expected = {s.controller, s.m, s.X};

    const ode::OdeSystem sys = build_ffwd(f, DisturbanceInputs{});
    ode::Box box;
    for (double v : expected) {
      box.lo.push_back(0.0);
      box.hi.push_back(2.0 * v + 1.0);
    }
    const std::vector<ode::Equilibrium> eqs = find_equilibria(sys, box, 16);
    REQUIRE(eqs.size() == 1);
    CHECK(eqs[0].stability == ode::Stability::stable);
    for (std::size_t i = 0; i < expected.size(); ++i) {
      const double scale = std::max(1.0, std::abs(expected[i]));
      CHECK(std::abs(eqs[0].point[i] - expected[i]) / scale <= 1e-8);
    }
  }
}

TEST_CASE("simulated steady state matches the closed form") {
  for (FfwdVariant variant : {FfwdVariant::ern, FfwdVariant::microrna}) {
    FfwdParams f;
    f.variant = variant;
    f.g = 5.0;
    DisturbanceInputs dist;
    dist.d1 = Schedule::constant(1.5);
    dist.d2 = Schedule::constant(0.8);
    const ode::OdeSystem sys = build_ffwd(f, dist);
    const std::vector<double> x0(static_cast<std::size_t>(sys.dim), 0.0);
    const auto res = simulate_to_steady_state(sys, x0, {});
    const FfwdSteady s = ffwd_steady_state(f, 1.5, 0.8);
    CHECK(res.equilibrium.point.back() == doctest::Approx(s.X).epsilon(1e-7));
  }
}

TEST_CASE("validation accepts delta = 0 and rejects nonpositive rates") {
  FfwdParams f;
  f.delta = 0.0;
  CHECK_NOTHROW(f.validate());
  f.delta = -0.1;
  CHECK_THROWS_AS(f.validate(), std::invalid_argument);
  FfwdParams g;
  g.g = 0.0;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  CHECK_THROWS_AS(ffwd_steady_state(FfwdParams{}, 0.0, 1.0), std::invalid_argument);
}
