#include <benchmark/benchmark.h>

#include <vector>

#include "biocircuit/analysis/ensemble.hpp"
#include "biocircuit/models/ffwd.hpp"
#include "biocircuit/models/reference.hpp"
#include "biocircuit/ode/equilibria.hpp"
#include "biocircuit/ode/integrator.hpp"

using namespace biocircuit;

static void BM_IntegratePlantStep(benchmark::State& state) {
  models::DisturbanceInputs dist;
  dist.H_GRN = models::Schedule({{0.0, 0.0}, {5.0, 1.0}});
  const ode::OdeSystem sys = models::build_plant(models::PlantParams{}, dist);
  const std::vector<double> x0 = {0.0, 0.0};
  for (auto _ : state) {
    const ode::Trajectory traj = integrate(sys, x0, 0.0, 20.0, {});
    benchmark::DoNotOptimize(traj.data.data());
  }
}
BENCHMARK(BM_IntegratePlantStep);

static void BM_FindEquilibriaGrn(benchmark::State& state) {
  const models::GrnParams grn = models::reference_grn();
  const models::GrnReferenceMeta meta = models::grn_reference_meta();
  const ode::OdeSystem sys = models::build_grn(grn, models::GrnControl::open);
  for (auto _ : state) {
    const auto eqs = find_equilibria(sys, meta.box, meta.n_starts);
    benchmark::DoNotOptimize(eqs.size());
  }
}
BENCHMARK(BM_FindEquilibriaGrn);

static void BM_FfwdSteadyState(benchmark::State& state) {
  const models::FfwdParams f = models::reference_ffwd();
  double d = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(models::ffwd_steady_state(f, d, 1.0).X);
    d = d < 2.0 ? d + 1e-6 : 0.5;
  }
}
BENCHMARK(BM_FfwdSteadyState);

static void BM_EnsembleClosedForm(benchmark::State& state) {
  models::FfwdParams f = models::reference_ffwd();
  f.g = 100.0;
  for (auto _ : state) {
    const auto summary = analysis::ensemble_run(
        [&](double d) { return models::ffwd_steady_state(f, d, 1.0).X; },
        static_cast<std::size_t>(state.range(0)), 7, 0.5);
    benchmark::DoNotOptimize(summary.cv);
  }
}
BENCHMARK(BM_EnsembleClosedForm)->Arg(1000)->Arg(10000);

static void BM_QicClosedLoopSettle(benchmark::State& state) {
  const models::QicParams q = models::reference_qic();
  const models::PlantParams p = models::reference_plant();
  const ode::OdeSystem sys =
      build_qic(q, p, models::DisturbanceInputs{}, models::QicLoop::closed);
  const std::vector<double> x0 = {0.0, 0.0, 0.0};
  ode::IntegratorConfig cfg;
  cfg.ss_tol = 1e-7;
  cfg.t_max = 400.0;
  for (auto _ : state) {
    const auto res = simulate_to_steady_state(sys, x0, cfg);
    benchmark::DoNotOptimize(res.equilibrium.point.data());
  }
}
BENCHMARK(BM_QicClosedLoopSettle);

BENCHMARK_MAIN();
