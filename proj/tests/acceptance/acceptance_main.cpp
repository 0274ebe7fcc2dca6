// Acceptance suite: one line per criterion, PASS/FAIL with measured runtime.
// Exits nonzero if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "biocircuit/analysis/rng.hpp"
#include "biocircuit/experiments/scenario.hpp"
#include "biocircuit/io/config.hpp"
#include "biocircuit/models/reference.hpp"
#include "biocircuit/ode/equilibria.hpp"
#include "biocircuit/ode/integrator.hpp"

using namespace biocircuit;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// ------------------------------------------------------------------ helpers

double closed_loop_steady_output(double k2) {
  models::QicParams q = models::reference_qic();
  q.k1 = k2;
  q.k2 = k2;
  q.u_tot = 3.0 * k2 * q.v;  // keep the cycle clear of its saturated layer
  const models::PlantParams p = models::reference_plant();
  const ode::OdeSystem sys =
      build_qic(q, p, models::DisturbanceInputs{}, models::QicLoop::closed);
  ode::IntegratorConfig cfg;
  cfg.rtol = 1e-10;
  cfg.atol = 1e-12;
  cfg.ss_tol = 1e-7;
  cfg.t_max = 500.0;
  const auto res = simulate_to_steady_state(sys, std::vector<double>{0.0, 0.0, 0.0}, cfg);
  const auto polished = newton_refine(sys, res.trajectory.back_state());
  if (!polished.converged) throw std::runtime_error("closed loop did not settle");
  return polished.point[1];
}

Outcome from_verdicts(const experiments::ExperimentReport& report,
                      const std::vector<std::string>& ids) {
  Outcome out;
  out.pass = true;
  std::ostringstream detail;
  for (const std::string& id : ids) {
    bool found = false;
    for (const auto& v : report.verdicts) {
      if (v.id != id) continue;
      found = true;
      if (!v.pass) {
        out.pass = false;
        detail << id << ": " << v.message << "; ";
      }
    }
    if (!found) {
      out.pass = false;
      detail << id << ": verdict missing; ";
    }
  }
  for (const auto& v : report.verdicts)
    if (v.id == "pipeline" && !v.pass) {
      out.pass = false;
      detail << "pipeline: " << v.message << "; ";
    }
  out.detail = out.pass ? "all scenario verdicts hold" : detail.str();
  return out;
}

// ---------------------------------------------------------------- criteria

Outcome criterion_qic_epsilon_scaling() {
  const double k2_values[] = {10.0, 100.0, 1000.0};
  double errors[3];
  for (int i = 0; i < 3; ++i)
    errors[i] = std::abs(closed_loop_steady_output(k2_values[i]) - 1.0);
  const double r1 = errors[0] / errors[1];
  const double r2 = errors[1] / errors[2];
  Outcome out;
  out.pass = r1 >= 5.0 && r1 <= 20.0 && r2 >= 5.0 && r2 <= 20.0;
  out.detail = "per-decade error ratios " + fmt(r1) + ", " + fmt(r2) +
               " (bounds [5, 20]); errors " + fmt(errors[0]) + ", " + fmt(errors[1]) +
               ", " + fmt(errors[2]);
  return out;
}

Outcome criterion_qic_step_rejection() {
  const auto report = experiments::run_scenario({"qic_step", {}});
  return from_verdicts(report, {"closed_loop_rejects_step", "open_loop_tracks_step"});
}

Outcome criterion_ffwd_perfect_adaptation() {
  models::FfwdParams f = models::reference_ffwd();
  f.delta = 0.0;
  const double reference = models::ffwd_steady_state(f, 1.0, 1.0).X;
  bool exact = true;
  for (double d : {0.25, 0.5, 1.0, 2.0, 4.0})
    if (models::ffwd_steady_state(f, d, 1.0).X != reference) exact = false;
  Outcome out;
  out.pass = exact;
  out.detail = exact ? "steady output bitwise constant across the d grid"
                     : "steady output varies with d";
  return out;
}

Outcome criterion_ffwd_theta_attenuation() {
  const double d_grid[] = {0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0};
  double spreads[3];
  const double thetas[] = {1.0, 10.0, 100.0};
  for (int i = 0; i < 3; ++i) {
    models::FfwdParams f = models::reference_ffwd();
    f.g = thetas[i];  // theta = g for the reference controller constants
    double lo = 1e300, hi = -1e300, nominal = 0.0;
    for (double d : d_grid) {
      const double X = models::ffwd_steady_state(f, d, 1.0).X;
      lo = std::min(lo, X);
      hi = std::max(hi, X);
      if (d == 1.0) nominal = X;
    }
    spreads[i] = (hi - lo) / nominal;
  }
  Outcome out;
  out.pass = spreads[0] > spreads[1] && spreads[1] > spreads[2] && spreads[2] <= 0.02;
  out.detail = "normalized spreads " + fmt(spreads[0]) + " > " + fmt(spreads[1]) +
               " > " + fmt(spreads[2]) + ", final <= 0.02";
  return out;
}

Outcome criterion_hidden_integral() {
  const auto report = experiments::run_scenario({"ffwd_hidden_integral", {}});
  return from_verdicts(report,
                       {"terminal_m_matches_reference_low", "terminal_m_matches_reference_high",
                        "memory_variable_residual_low", "memory_variable_residual_high",
                        "reference_is_disturbance_free"});
}

Outcome criterion_grn_tristability() {
  const auto report = experiments::run_scenario({"grn_bifurcation", {}});
  return from_verdicts(report,
                       {"tristable_newton", "tristable_grid_scan", "states_ordered",
                        "monostable_high_at_large_input", "stable_count_never_increases",
                        "low_branch_disappears"});
}

Outcome criterion_highgain_envelope() {
  const auto report = experiments::run_scenario({"grn_highgain", {}});
  return from_verdicts(report, {"trajectory_inside_envelope_g100",
                                "trajectory_inside_envelope_g1000"});
}

Outcome criterion_repro_closed_form() {
  // closed form vs the equilibrium finder over 50 random draws
  int mismatches = 0;
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    models::ReproParams r;
    double* fields[] = {&r.alpha, &r.beta, &r.c,     &r.delta, &r.delta_bar,
                        &r.kappa, &r.gamma, &r.d};
    for (std::uint64_t i = 0; i < 8; ++i)
      *fields[i] = analysis::stream_lognormal(trial * 7919 + 11, i, 0.4);
    r.G = 1.0 + 50.0 * analysis::stream_uniform(trial * 7919 + 11, 40);
    const double H = 2.0 * analysis::stream_uniform(trial * 7919 + 11, 41);

    const models::ReproSteady s = repro_steady_state(r, H);
    const ode::OdeSystem sys = build_repro(r, models::Schedule::constant(H));
    const ode::Box box{{0.0, 0.0, 0.0},
                       {2.0 * s.m_i + 1.0, 2.0 * s.mu + 1.0, 2.0 * s.x_i + 1.0}};
    const auto eqs = find_equilibria(sys, box, 12);
    if (eqs.size() != 1) {
      ++mismatches;
      continue;
    }
    const double expect[] = {s.m_i, s.mu, s.x_i};
    for (int i = 0; i < 3; ++i) {
      const double scale = std::max(1.0, std::abs(expect[i]));
      if (std::abs(eqs[0].point[i] - expect[i]) / scale > 1e-6) ++mismatches;
    }
  }

  // terminal offset scaling under a bounded time-varying drive
  const models::Schedule drive({{0.0, 2.0}, {10.0, 3.5}, {20.0, 1.5}});
  auto offset = [&](double G) {
    models::ReproParams r;
    r.G = G;
    const ode::OdeSystem sys = build_repro(r, drive);
    const ode::Trajectory traj =
        integrate(sys, std::vector<double>{0.0, 0.0, 0.0}, 0.0, 40.0, {});
    return std::abs(traj.back_state()[2] - r.x_limit());
  };
  const double off100 = offset(100.0);
  const double off1000 = offset(1000.0);
  const bool shrink = off1000 * 8.0 <= off100;

  Outcome out;
  out.pass = mismatches == 0 && shrink;
  out.detail = std::to_string(mismatches) + " closed-form mismatches over 50 draws; " +
               "offset ratio " + fmt(off100 / off1000) + " (floor 8)";
  return out;
}

Outcome criterion_dosage_ensemble() {
  const experiments::Scenario scenario{"ffwd_copy_number", {}};
  const auto a = experiments::run_scenario(scenario);
  const auto b = experiments::run_scenario(scenario);
  Outcome out = from_verdicts(a, {"cv_attenuated"});
  if (!out.pass) return out;

  // bit-reproducibility of the written payload for the fixed default seed
  auto digest = [](const experiments::ExperimentReport& r) {
    std::ostringstream s;
    for (const auto& [name, table] : r.tables) s << name << emit_csv(table);
    for (const auto& [name, svg] : r.figures) s << name << svg;
    return s.str();
  };
  if (digest(a) != digest(b)) {
    out.pass = false;
    out.detail = "repeated runs differ for the same seed";
  } else {
    out.detail = "cv attenuation holds and payloads are byte-identical across runs";
  }
  return out;
}

Outcome criterion_reprogramming() {
  const auto report = experiments::run_scenario({"repro_trajectories", {}});
  return from_verdicts(report,
                       {"inside_pluripotent_basin_at_t_off", "controlled_arm_lands_pluripotent",
                        "overexpression_arm_lands_high"});
}

Outcome criterion_engineering_floor() {
  std::ostringstream detail;
  bool pass = true;

  // integrator order: halving a forced fixed step cuts the endpoint error 4x
  {
    ode::OdeSystem decay;
    decay.dim = 1;
    decay.names = {"x"};
    decay.rhs = [](double, std::span<const double> x, std::span<double> dx) {
      dx[0] = -x[0];
    };
    auto fixed_error = [&](double h) {
      ode::IntegratorConfig cfg;
      cfg.rtol = 1.0;
      cfg.atol = 1.0;
      cfg.h_init = h;
      cfg.h_max = h;
      const auto traj = integrate(decay, std::vector<double>{1.0}, 0.0, 1.0, cfg);
      return std::abs(traj.back_state()[0] - std::exp(-1.0));
    };
    const double ratio = fixed_error(0.1) / fixed_error(0.05);
    if (ratio < 4.0) pass = false;
    detail << "order-check error ratio " << fmt(ratio) << " (floor 4); ";

    ode::IntegratorConfig loose;
    loose.rtol = 1e-6;
    loose.atol = 1e-9;
    ode::IntegratorConfig tight = loose;
    tight.rtol = 5e-7;
    tight.atol = 5e-10;
    auto tol_error = [&](const ode::IntegratorConfig& cfg) {
      const auto traj = integrate(decay, std::vector<double>{1.0}, 0.0, 1.0, cfg);
      return std::abs(traj.back_state()[0] - std::exp(-1.0));
    };
    if (!(tol_error(tight) < tol_error(loose))) pass = false;
  }

  // CLI end-to-end
  {
    const std::string cli = BIOCIRCUIT_CLI_PATH;
    const fs::path dir = fs::temp_directory_path() / "biocircuit_acceptance_cli";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto exit_code = [&](const std::string& args) {
      const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
      return WEXITSTATUS(std::system(cmd.c_str()));
    };
    {
      std::ofstream cfg(dir / "bad.cfg");
      cfg << "[output]\ndir = x\n";
    }
    const int list_code = exit_code("scenario list");
    const int bad_code = exit_code("simulate --config " + (dir / "bad.cfg").string());
    const int usage_code = exit_code("simulate");
    const int scen_code =
        exit_code("scenario run ffwd_resource_titration --out " + (dir / "rep").string());
    const bool files = fs::exists(dir / "rep" / "titration.csv") &&
                       fs::exists(dir / "rep" / "titration.svg") &&
                       fs::exists(dir / "rep" / "report.txt");
    if (list_code != 0 || bad_code != 2 || usage_code != 2 || scen_code != 0 || !files)
      pass = false;
    detail << "cli exits " << list_code << "/" << bad_code << "/" << usage_code << "/"
           << scen_code << " (want 0/2/2/0), report files " << (files ? "present" : "missing")
           << "; ";
    fs::remove_all(dir);
  }

  // config fuzz: 100000 inputs, structured errors only
  {
    const std::string valid =
        "[model]\nfamily = plant\nalpha = 2\n[disturbances]\nH_GRN = (0, 0) (5, 1)\n"
        "[integrator]\nt_end = 10\n[output]\ndir = out\n";
    std::size_t crashes = 0;
    auto survives = [](const std::string& text) {
      try {
        (void)io::parse_config(text);
        return true;
      } catch (const io::ConfigError&) {
        return true;
      } catch (...) {
        return false;
      }
    };
    for (std::uint64_t trial = 0; trial < 50000; ++trial) {
      const std::size_t length = analysis::stream_word(trial, 0) % 300;
      std::string text;
      for (std::size_t i = 0; i < length; ++i)
        text.push_back(static_cast<char>(analysis::stream_word(trial, i + 1) & 0xFF));
      if (!survives(text)) ++crashes;
    }
    for (std::uint64_t trial = 0; trial < 50000; ++trial) {
      std::string text = valid;
      const std::size_t edits = 1 + analysis::stream_word(trial, 7) % 6;
      for (std::size_t e = 0; e < edits && !text.empty(); ++e) {
        const std::uint64_t word = analysis::stream_word(trial, 50 + e);
        const std::size_t pos = word % text.size();
        if (word % 3 == 0)
          text[pos] = static_cast<char>(word >> 8);
        else if (word % 3 == 1)
          text.insert(pos, 1, static_cast<char>(word >> 8));
        else
          text.erase(pos, 1 + word % 4);
      }
      if (text.empty()) text = "=";
      if (!survives(text)) ++crashes;
    }
    if (crashes != 0) pass = false;
    detail << crashes << " crashes over 100000 fuzz inputs";
  }

  Outcome out;
  out.pass = pass;
  out.detail = detail.str();
  return out;
}

struct Criterion {
  const char* id;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"qic-epsilon-scaling", 10.0, criterion_qic_epsilon_scaling},
      {"qic-step-rejection", 5.0, criterion_qic_step_rejection},
      {"ffwd-perfect-adaptation", 1.0, criterion_ffwd_perfect_adaptation},
      {"ffwd-theta-attenuation", 5.0, criterion_ffwd_theta_attenuation},
      {"ffwd-hidden-integral", 5.0, criterion_hidden_integral},
      {"grn-tristability-bifurcation", 30.0, criterion_grn_tristability},
      {"grn-highgain-envelope", 5.0, criterion_highgain_envelope},
      {"repro-closed-form-limits", 20.0, criterion_repro_closed_form},
      {"dosage-compensation-ensemble", 10.0, criterion_dosage_ensemble},
      {"coupled-reprogramming", 20.0, criterion_reprogramming},
      {"engineering-floor", 60.0, criterion_engineering_floor},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].run();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = elapsed < criteria[i].budget_seconds;
    const bool pass = outcome.pass && in_budget;
    if (!pass) ++failures;
    std::printf("%s %2zu %s (%.2f s / %.0f s): %s%s\n", pass ? "PASS" : "FAIL", i + 1,
                criteria[i].id, elapsed, criteria[i].budget_seconds,
                outcome.detail.c_str(), in_budget ? "" : " [over budget]");
    std::fflush(stdout);
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
