#include "biocircuit/experiments/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include "biocircuit/analysis/bifurcation.hpp"
#include "biocircuit/analysis/ensemble.hpp"
#include "biocircuit/analysis/hidden_integral.hpp"
#include "biocircuit/io/svg.hpp"
#include "biocircuit/models/reference.hpp"
#include "biocircuit/ode/integrator.hpp"

namespace biocircuit::experiments {
namespace {

constexpr std::uint64_t kDefaultSeed = 424242;

using models::DisturbanceInputs;
using models::Schedule;
using ode::IntegratorConfig;
using ode::OdeSystem;
using ode::Trajectory;

// bad override keys or values are usage errors, not pipeline failures
struct OverrideError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

class OverrideReader {
 public:
  explicit OverrideReader(const std::map<std::string, std::string>& overrides)
      : overrides_(overrides) {}

  double number(const std::string& key, double fallback) {
    const auto it = overrides_.find(key);
    if (it == overrides_.end()) return fallback;
    consumed_.insert(key);
    char* end = nullptr;
    const double v = std::strtod(it->second.c_str(), &end);
    if (end != it->second.c_str() + it->second.size() || !std::isfinite(v))
      throw OverrideError("override '" + key + "' is not a finite number");
    return v;
  }

  std::uint64_t seed(std::uint64_t fallback) {
    const double v = number("seed", static_cast<double>(fallback));
    if (v < 0 || v != std::floor(v))
      throw OverrideError("override 'seed' must be a nonnegative integer");
    return static_cast<std::uint64_t>(v);
  }

  void finish() const {
    for (const auto& [key, value] : overrides_)
      if (!consumed_.count(key))
        throw OverrideError("scenario does not declare a parameter '" + key + "'");
  }

 private:
  const std::map<std::string, std::string>& overrides_;
  std::set<std::string> consumed_;
};

void resolve(ExperimentReport& report, const std::string& key, double value) {
  report.resolved.emplace_back(key, io::format_double(value));
}

void add_verdict(ExperimentReport& report, const std::string& id, bool pass,
                 const std::string& message) {
  report.verdicts.push_back({id, pass, message});
}

// settle and polish; throws if neither the window criterion nor Newton holds
std::vector<double> settle(const OdeSystem& sys, std::span<const double> x0,
                           double t_max = 400.0, double ss_tol = 1e-9) {
  IntegratorConfig cfg;
  cfg.rtol = 1e-10;
  cfg.atol = 1e-12;
  cfg.t_max = t_max;
  cfg.ss_tol = ss_tol;
  const ode::SteadyStateResult res = simulate_to_steady_state(sys, x0, cfg);
  const ode::NewtonResult polished = newton_refine(sys, res.trajectory.back_state());
  if (!polished.converged)
    throw std::runtime_error("no steady state reached before t_max");
  return polished.point;
}

struct StableTriple {
  std::vector<double> somatic, pluripotent, high;
  std::vector<ode::Equilibrium> all;
  int stable_count = 0;
};

StableTriple grn_stable_triple(const models::GrnParams& grn) {
  const models::GrnReferenceMeta meta = models::grn_reference_meta();
  models::GrnParams open = grn;
  open.u_i = 0.0;
  const OdeSystem sys = models::build_grn(open, models::GrnControl::open);
  StableTriple triple;
  triple.all = ode::find_equilibria(sys, meta.box, meta.n_starts);
  std::vector<std::vector<double>> stable;
  for (const ode::Equilibrium& e : triple.all)
    if (e.stability == ode::Stability::stable) stable.push_back(e.point);
  triple.stable_count = static_cast<int>(stable.size());
  std::sort(stable.begin(), stable.end());
  if (stable.size() == 3) {
    triple.somatic = stable[0];
    triple.pluripotent = stable[1];
    triple.high = stable[2];
  }
  return triple;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// ---------------------------------------------------------------- qic_step

void run_qic_step(ExperimentReport& report, OverrideReader& reader) {
  models::QicParams q = models::reference_qic();
  const models::PlantParams p = models::reference_plant();
  q.k2 = reader.number("k2", q.k2);
  q.k1 = reader.number("k1", q.k2);  // gain k1/k2 = 1 unless overridden
  const double t_step = reader.number("t_step", 60.0);
  const double t_end = reader.number("t_end", 120.0);
  const double d1_post = reader.number("d1_post", 0.5);
  reader.finish();

  const double eps = q.epsilon();
  q.w_open = models::calibrate_w_open(q, p);
  resolve(report, "k1", q.k1);
  resolve(report, "k2", q.k2);
  resolve(report, "eps", eps);
  resolve(report, "w_open", q.w_open);
  resolve(report, "t_step", t_step);
  resolve(report, "d1_post", d1_post);

  DisturbanceInputs stepped;
  stepped.d1 = Schedule({{0.0, 1.0}, {t_step, d1_post}});
  const OdeSystem closed_sys = models::build_qic(q, p, stepped, models::QicLoop::closed);
  const OdeSystem open_sys = models::build_qic(q, p, stepped, models::QicLoop::open);

  IntegratorConfig cfg;
  cfg.sample_dt = 0.05;
  const std::vector<double> x0(3, 0.0);
  const Trajectory closed_traj = integrate(closed_sys, x0, 0.0, t_end, cfg);
  const Trajectory open_traj = integrate(open_sys, x0, 0.0, t_end, cfg);

  DisturbanceInputs nominal, post;
  nominal.d1 = Schedule::constant(1.0);
  post.d1 = Schedule::constant(d1_post);
  const auto steady_y = [&](const DisturbanceInputs& dist, models::QicLoop loop) {
    const OdeSystem sys = models::build_qic(q, p, dist, loop);
    return settle(sys, x0)[1];
  };
  const double y_closed_nom = steady_y(nominal, models::QicLoop::closed);
  const double y_closed_post = steady_y(post, models::QicLoop::closed);
  const double y_open_nom = steady_y(nominal, models::QicLoop::open);
  const double y_open_post = steady_y(post, models::QicLoop::open);

  io::CsvTable table;
  table.header = {"t", "y_closed", "y_open", "u_closed", "u_open"};
  for (std::size_t i = 0; i < closed_traj.size(); ++i)
    table.rows.push_back({closed_traj.times[i], closed_traj.value(i, 1),
                          open_traj.value(i, 1), closed_traj.value(i, 2),
                          open_traj.value(i, 2)});
  report.tables.emplace_back("step_response", table);

  io::Series s_closed{"y_closed", closed_traj.times, closed_traj.column(1)};
  io::Series s_open{"y_open", open_traj.times, open_traj.column(1)};
  const io::Series series[] = {s_closed, s_open};
  report.figures.emplace_back(
      "step_response",
      io::emit_svg(series, {"transcriptional disturbance step", "t", "output y"}));

  const double closed_dev = std::abs(y_closed_post - y_closed_nom) / y_closed_nom;
  const double open_dev = std::abs(y_open_post - y_open_nom) / y_open_nom;
  add_verdict(report, "closed_loop_rejects_step", closed_dev <= 5.0 * eps,
              "relative deviation " + io::format_double(closed_dev) + " vs bound " +
                  io::format_double(5.0 * eps));
  add_verdict(report, "open_loop_tracks_step", open_dev >= 0.25,
              "relative deviation " + io::format_double(open_dev) + " vs floor 0.25");
  const double violation = models::zero_order_violation_fraction(closed_traj, q);
  add_verdict(report, "zero_order_regime", violation <= 0.1,
              "violation fraction " + io::format_double(violation));
}

// ------------------------------------------------- ffwd_resource_titration

void run_ffwd_resource_titration(ExperimentReport& report, OverrideReader& reader) {
  models::FfwdParams f = models::reference_ffwd();
  f.g = reader.number("g", 100.0);
  const double K_A = reader.number("K_A", 1.0);
  reader.finish();
  resolve(report, "g", f.g);
  resolve(report, "theta", f.theta());
  resolve(report, "K_A", K_A);

  const models::PlantParams unregulated;
  const double activator[] = {0.0, 1.0, 2.0, 4.0, 8.0};

  io::CsvTable table;
  table.header = {"activator", "d1", "x_regulated", "x_unregulated",
                  "x_regulated_rel", "x_unregulated_rel"};
  std::vector<double> a_axis, reg_rel, unreg_rel;
  const double x_reg0 = models::ffwd_steady_state(f, 1.0, 1.0).X;
  const double x_unreg0 = models::plant_steady_state(unregulated, 1.0, 1.0)[1];
  for (double A : activator) {
    const double d1 = 1.0 / (1.0 + A / K_A);
    const double x_reg = models::ffwd_steady_state(f, d1, 1.0).X;
    const double x_unreg = models::plant_steady_state(unregulated, d1, 1.0)[1];
    table.rows.push_back({A, d1, x_reg, x_unreg, x_reg / x_reg0, x_unreg / x_unreg0});
    a_axis.push_back(A);
    reg_rel.push_back(x_reg / x_reg0);
    unreg_rel.push_back(x_unreg / x_unreg0);
  }
  report.tables.emplace_back("titration", table);

  const io::Series series[] = {{"regulated", a_axis, reg_rel},
                               {"unregulated", a_axis, unreg_rel}};
  report.figures.emplace_back(
      "titration",
      io::emit_svg(series, {"resource sequestration by an activator", "activator",
                            "output relative to nominal"}));

  double worst = 0.0;
  for (double r : reg_rel) worst = std::max(worst, std::abs(r - 1.0));
  add_verdict(report, "regulated_flat", worst <= 0.10,
              "max relative excursion " + io::format_double(worst));
  add_verdict(report, "unregulated_drops", unreg_rel.back() <= 0.20,
              "output fell to " + io::format_double(unreg_rel.back()) + " of nominal");
}

// ------------------------------------------------------- ffwd_copy_number

void run_ffwd_copy_number(ExperimentReport& report, OverrideReader& reader) {
  models::FfwdParams f = models::reference_ffwd();
  f.g = reader.number("g", 100.0);
  const double sigma = reader.number("sigma", 0.5);
  const auto n = static_cast<std::size_t>(reader.number("n", 10000.0));
  const std::uint64_t seed = reader.seed(kDefaultSeed);
  reader.finish();
  resolve(report, "g", f.g);
  resolve(report, "sigma", sigma);
  resolve(report, "n", static_cast<double>(n));
  resolve(report, "seed", static_cast<double>(seed));

  const models::PlantParams unregulated;
  const analysis::EnsembleSummary regulated = analysis::ensemble_run(
      [&](double d) { return models::ffwd_steady_state(f, d, 1.0).X; }, n, seed, sigma);
  const analysis::EnsembleSummary bare = analysis::ensemble_run(
      [&](double d) { return models::plant_steady_state(unregulated, d, 1.0)[1]; }, n,
      seed, sigma);

  io::CsvTable summary;
  summary.header = {"n", "seed", "cv_regulated", "cv_unregulated", "mean_regulated",
                    "mean_unregulated"};
  summary.rows.push_back({static_cast<double>(n), static_cast<double>(seed),
                          regulated.cv, bare.cv, regulated.mean, bare.mean});
  report.tables.emplace_back("copy_number_summary", summary);

  auto histogram_table = [](const analysis::EnsembleSummary& s) {
    io::CsvTable t;
    t.header = {"bin_center", "count"};
    for (std::size_t b = 0; b < s.bin_counts.size(); ++b)
      t.rows.push_back({0.5 * (s.bin_edges[b] + s.bin_edges[b + 1]),
                        static_cast<double>(s.bin_counts[b])});
    return t;
  };
  report.tables.emplace_back("hist_regulated", histogram_table(regulated));
  report.tables.emplace_back("hist_unregulated", histogram_table(bare));

  // histograms over output normalized by its mean, so the two are comparable
  auto normalized_series = [](const analysis::EnsembleSummary& s, const std::string& name) {
    io::Series out{name, {}, {}};
    for (std::size_t b = 0; b < s.bin_counts.size(); ++b) {
      out.x.push_back(0.5 * (s.bin_edges[b] + s.bin_edges[b + 1]) / s.mean);
      out.y.push_back(static_cast<double>(s.bin_counts[b]));
    }
    return out;
  };
  const io::Series series[] = {normalized_series(regulated, "regulated"),
                               normalized_series(bare, "unregulated")};
  report.figures.emplace_back(
      "copy_number",
      io::emit_svg(series, {"copy-number variability", "output / mean", "cells"}));

  add_verdict(report, "cv_attenuated", regulated.cv <= 0.1 * bare.cv,
              "cv " + io::format_double(regulated.cv) + " vs 0.1 * " +
                  io::format_double(bare.cv));
}

// --------------------------------------------------- ffwd_hidden_integral

void run_ffwd_hidden_integral(ExperimentReport& report, OverrideReader& reader) {
  models::FfwdParams f = models::reference_ffwd();
  f.delta = 0.0;
  f.g = reader.number("g", 1.0);
  const double t_end = reader.number("t_end", 45.0);
  const double sample_dt = reader.number("sample_dt", 0.01);
  reader.finish();
  resolve(report, "g", f.g);
  resolve(report, "t_end", t_end);
  resolve(report, "sample_dt", sample_dt);

  IntegratorConfig cfg;
  cfg.rtol = 1e-10;
  cfg.atol = 1e-12;
  cfg.sample_dt = sample_dt;

  double v_refs[2] = {0.0, 0.0};
  const double d1_values[2] = {0.5, 2.0};
  const char* labels[2] = {"low", "high"};
  std::vector<io::Series> z_series;
  for (int k = 0; k < 2; ++k) {
    const double d1 = d1_values[k];
    DisturbanceInputs dist;
    dist.d1 = Schedule::constant(d1);
    const OdeSystem sys = models::build_ffwd(f, dist);
    const std::vector<double> x0(4, 0.0);  // m_E(0) = 0 required
    const Trajectory traj = integrate(sys, x0, 0.0, t_end, cfg);
    const analysis::HiddenIntegralTrace trace =
        analysis::hidden_integral_trace(traj, f, d1);
    v_refs[k] = trace.v_ref;

    io::CsvTable table;
    table.header = {"t", "z", "dz_dt", "residual", "m", "e"};
    const int im = traj.index_of("m"), iE = traj.index_of("E");
    for (std::size_t i = 0; i < trace.times.size(); ++i)
      table.rows.push_back({trace.times[i], trace.z[i], trace.dz_dt[i],
                            trace.residual[i], traj.value(i + 1, im),
                            traj.value(i + 1, iE)});
    report.tables.emplace_back(std::string("trace_d1_") + labels[k], table);
    z_series.push_back({std::string("z_d1_") + labels[k], trace.times, trace.z});

    const double m_terminal = traj.value(traj.size() - 1, im);
    add_verdict(report, std::string("terminal_m_matches_reference_") + labels[k],
                std::abs(m_terminal - trace.v_ref) <= 1e-6,
                "m(T) = " + io::format_double(m_terminal) + ", reference " +
                    io::format_double(trace.v_ref));
    add_verdict(report, std::string("memory_variable_residual_") + labels[k],
                trace.max_residual <= 1e-3 * trace.max_dz_dt,
                "max residual " + io::format_double(trace.max_residual) + " vs " +
                    io::format_double(1e-3 * trace.max_dz_dt));
    resolve(report, std::string("v_ref_d1_") + labels[k], trace.v_ref);
  }
  report.figures.emplace_back(
      "hidden_integral",
      io::emit_svg(z_series, {"memory variable", "t", "z"}));
  add_verdict(report, "reference_is_disturbance_free", v_refs[0] == v_refs[1],
              "v_ref " + io::format_double(v_refs[0]) + " and " +
                  io::format_double(v_refs[1]));
}

// ------------------------------------------------------- grn_bifurcation

void run_grn_bifurcation(ExperimentReport& report, OverrideReader& reader) {
  const models::GrnParams grn = models::reference_grn();
  const models::GrnReferenceMeta meta = models::grn_reference_meta();
  const double u_max = reader.number("u_max", meta.u_sweep_max);
  const int points = static_cast<int>(reader.number("points", meta.sweep_points));
  reader.finish();
  resolve(report, "u_max", u_max);
  resolve(report, "points", points);
  resolve(report, "u_large", meta.u_large);

  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    grid[static_cast<std::size_t>(i)] = u_max * i / (points - 1);

  const auto family = [grn](double u) {
    models::GrnParams g = grn;
    g.u_i = u;
    return models::build_grn(g, models::GrnControl::open);
  };
  const analysis::BifurcationDiagram diagram =
      analysis::bifurcation_sweep(family, "u_i", grid, meta.box, meta.n_starts);

  io::CsvTable table;
  table.header = {"u_i", "branch", "x_o", "x_n", "stable"};
  for (std::size_t k = 0; k < diagram.grid.size(); ++k)
    for (std::size_t j = 0; j < diagram.branches[k].size(); ++j) {
      const ode::Equilibrium& e = diagram.branches[k][j];
      table.rows.push_back({diagram.grid[k],
                            static_cast<double>(diagram.branch_ids[k][j]), e.point[0],
                            e.point[1],
                            e.stability == ode::Stability::stable ? 1.0 : 0.0});
    }
  report.tables.emplace_back("bifurcation", table);

  std::vector<io::Series> series(static_cast<std::size_t>(diagram.branch_count));
  for (int b = 0; b < diagram.branch_count; ++b)
    series[static_cast<std::size_t>(b)].name = "branch_" + std::to_string(b);
  for (std::size_t k = 0; k < diagram.grid.size(); ++k)
    for (std::size_t j = 0; j < diagram.branches[k].size(); ++j) {
      auto& s = series[static_cast<std::size_t>(diagram.branch_ids[k][j])];
      s.x.push_back(diagram.grid[k]);
      s.y.push_back(diagram.branches[k][j].point[0]);
    }
  series.erase(std::remove_if(series.begin(), series.end(),
                              [](const io::Series& s) { return s.x.empty(); }),
               series.end());
  report.figures.emplace_back(
      "bifurcation",
      io::emit_svg(series, {"equilibria under overexpression", "u_i", "x_O"}));

  // tristability at u = 0, counted two independent ways
  const StableTriple triple = grn_stable_triple(grn);
  add_verdict(report, "tristable_newton",
              triple.stable_count == 3 && triple.all.size() >= 5,
              std::to_string(triple.stable_count) + " stable of " +
                  std::to_string(triple.all.size()) + " equilibria");
  const OdeSystem at_zero = family(0.0);
  const std::vector<analysis::GridScanCandidate> scan =
      analysis::grid_scan_equilibria_2d(at_zero, meta.box, 200);
  int scan_stable = 0;
  for (const auto& c : scan)
    if (c.stability == ode::Stability::stable) ++scan_stable;
  add_verdict(report, "tristable_grid_scan",
              scan_stable == 3 && scan.size() >= 5,
              std::to_string(scan_stable) + " stable of " + std::to_string(scan.size()) +
                  " grid candidates");

  bool ordered = false;
  if (triple.stable_count == 3) {
    ordered = triple.somatic[0] < triple.pluripotent[0] &&
              triple.pluripotent[0] < triple.high[0] &&
              triple.somatic[1] < triple.pluripotent[1] &&
              triple.pluripotent[1] < triple.high[1];
  }
  add_verdict(report, "states_ordered", ordered,
              "somatic, pluripotent and high states are componentwise increasing");

  // one stable high/high state at large u_i
  models::GrnParams large = grn;
  large.u_i = meta.u_large;
  const std::vector<ode::Equilibrium> at_large = ode::find_equilibria(
      models::build_grn(large, models::GrnControl::open), meta.box, meta.n_starts);
  int large_stable = 0;
  const ode::Equilibrium* high_state = nullptr;
  for (const ode::Equilibrium& e : at_large)
    if (e.stability == ode::Stability::stable) {
      ++large_stable;
      high_state = &e;
    }
  bool high_position = false;
  if (large_stable == 1 && triple.stable_count == 3) {
    high_position = high_state->point[0] > 5.0 * triple.somatic[0] &&
                    high_state->point[1] > 5.0 * triple.somatic[1] &&
                    high_state->point[0] > triple.pluripotent[0];
  }
  add_verdict(report, "monostable_high_at_large_input",
              large_stable == 1 && high_position,
              std::to_string(large_stable) + " stable state(s) at u_i = " +
                  io::format_double(meta.u_large));

  bool nonincreasing = true;
  for (std::size_t k = 0; k + 1 < diagram.stable_counts.size(); ++k)
    if (diagram.stable_counts[k + 1] > diagram.stable_counts[k]) nonincreasing = false;
  add_verdict(report, "stable_count_never_increases",
              nonincreasing && diagram.stable_counts.front() == 3 &&
                  diagram.stable_counts.back() == 1,
              "stable count sequence runs 3 to 1 without increasing");

  // the somatic branch must die at a finite input level inside the sweep
  int low_branch = -1;
  double low_x = 1e300;
  for (std::size_t j = 0; j < diagram.branches[0].size(); ++j) {
    const ode::Equilibrium& e = diagram.branches[0][j];
    if (e.stability == ode::Stability::stable && e.point[0] < low_x) {
      low_x = e.point[0];
      low_branch = diagram.branch_ids[0][j];
    }
  }
  double last_low_u = diagram.grid.back();
  for (std::size_t k = diagram.grid.size(); k-- > 0;) {
    bool present = false;
    for (std::size_t j = 0; j < diagram.branches[k].size(); ++j)
      if (diagram.branch_ids[k][j] == low_branch &&
          diagram.branches[k][j].stability == ode::Stability::stable)
        present = true;
    if (present) {
      last_low_u = diagram.grid[k];
      break;
    }
  }
  add_verdict(report, "low_branch_disappears",
              low_branch >= 0 && last_low_u < diagram.grid.back(),
              "somatic branch last seen stable at u_i = " + io::format_double(last_low_u));
}

// --------------------------------------------------------- grn_highgain

void run_grn_highgain(ExperimentReport& report, OverrideReader& reader) {
  const models::GrnParams base = models::reference_grn();
  const double x_star = reader.number("x_star", base.x_star);
  const double t_end = reader.number("t_end", 8.0);
  reader.finish();
  const double D = base.bound_H_O();
  resolve(report, "x_star", x_star);
  resolve(report, "bound_d", D);

  IntegratorConfig cfg;
  cfg.sample_dt = 0.005;
  const double gains[2] = {100.0, 1000.0};
  const char* labels[2] = {"g100", "g1000"};

  io::CsvTable table;
  std::vector<io::Series> series;
  std::vector<std::vector<double>> columns;
  std::vector<double> times;
  for (int k = 0; k < 2; ++k) {
    models::GrnParams g = base;
    g.G = gains[k];
    g.x_star = x_star;
    const OdeSystem sys = models::build_grn(g, models::GrnControl::highgain);
    const std::vector<double> x0(2, 0.0);
    const Trajectory traj = integrate(sys, x0, 0.0, t_end, cfg);

    bool inside = true;
    double worst = 0.0;
    std::vector<double> lower(traj.size()), upper(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const models::EnvelopeBand band =
          models::highgain_envelope(traj.times[i], g.G, g.gamma, x_star, D);
      lower[i] = band.lower;
      upper[i] = band.upper;
      const double tol = 1e-6 + 1e-4 * band.upper;
      const double x = traj.value(i, 0);
      if (x < band.lower - tol || x > band.upper + tol) {
        inside = false;
        worst = std::max(worst, std::max(band.lower - x, x - band.upper));
      }
    }
    add_verdict(report, std::string("trajectory_inside_envelope_") + labels[k], inside,
                inside ? "all samples inside the analytic band"
                       : "worst excursion " + io::format_double(worst));
    if (k == 0) times = traj.times;
    columns.push_back(traj.column(0));
    columns.push_back(lower);
    columns.push_back(upper);
    series.push_back({std::string("x_o_") + labels[k], traj.times, traj.column(0)});
    if (k == 0) {
      series.push_back({"lower_g100", traj.times, lower});
      series.push_back({"upper_g100", traj.times, upper});
    }

    const double x_terminal = traj.value(traj.size() - 1, 0);
    const double steady_bound = (D + g.gamma * x_star) / (g.gamma + g.G);
    add_verdict(report, std::string("steady_state_near_reference_") + labels[k],
                std::abs(x_terminal - x_star) <= steady_bound,
                "offset " + io::format_double(std::abs(x_terminal - x_star)) +
                    " vs bound " + io::format_double(steady_bound));
  }
  table.header = {"t",          "x_o_g100",  "lower_g100", "upper_g100",
                  "x_o_g1000", "lower_g1000", "upper_g1000"};
  for (std::size_t i = 0; i < times.size(); ++i)
    table.rows.push_back({times[i], columns[0][i], columns[1][i], columns[2][i],
                          columns[3][i], columns[4][i], columns[5][i]});
  report.tables.emplace_back("highgain", table);
  report.figures.emplace_back(
      "highgain", io::emit_svg(series, {"high-gain clamp of x_O", "t", "x_O"}));
}

// ---------------------------------------------------- repro_trajectories

void run_repro_trajectories(ExperimentReport& report, OverrideReader& reader) {
  const models::GrnParams grn = models::reference_grn();
  models::ReproParams repro = models::reference_repro();
  const models::ReproReferenceMeta meta = models::repro_reference_meta();
  repro.G = reader.number("G", repro.G);
  const double t_off = reader.number("t_off", meta.t_off);
  const double u_over = reader.number("u_i", meta.u_overexpress);
  reader.finish();
  resolve(report, "G", repro.G);
  resolve(report, "t_off", t_off);
  resolve(report, "u_i", u_over);
  resolve(report, "x_limit", repro.x_limit());

  const StableTriple triple = grn_stable_triple(grn);
  if (triple.stable_count != 3)
    throw std::runtime_error("reference network is not tristable");

  // controlled arm: drive from the somatic state, then release
  const OdeSystem driven = models::build_repro_coupled(repro, grn);
  std::vector<double> x0 = {0.0, 0.0, triple.somatic[0], triple.somatic[1]};
  IntegratorConfig cfg;
  cfg.sample_dt = 0.02;
  const Trajectory phase1 = integrate(driven, x0, 0.0, t_off, cfg);

  // basin membership at release time: the bare network from here must settle
  // at the pluripotent state
  const std::vector<double> at_off = phase1.back_state();
  models::GrnParams open = grn;
  open.u_i = 0.0;
  const OdeSystem bare = models::build_grn(open, models::GrnControl::open);
  const std::vector<double> basin_state =
      settle(bare, std::vector<double>{at_off[2], at_off[3]});
  add_verdict(report, "inside_pluripotent_basin_at_t_off",
              max_abs_diff(basin_state, triple.pluripotent) <= 1e-5,
              "released network settles at (" + io::format_double(basin_state[0]) +
                  ", " + io::format_double(basin_state[1]) + ")");

  const OdeSystem released = models::build_repro_coupled_released(repro, grn);
  IntegratorConfig cfg2;
  cfg2.sample_dt = 0.02;
  cfg2.t_max = meta.t_settle;
  const Trajectory phase2 = integrate(released, at_off, t_off, t_off + meta.t_settle, cfg2);
  const std::vector<double> final_state = newton_refine(released, phase2.back_state()).point;
  const std::vector<double> final_grn = {final_state[2], final_state[3]};
  add_verdict(report, "controlled_arm_lands_pluripotent",
              max_abs_diff(final_grn, triple.pluripotent) <= 1e-5,
              "final state (" + io::format_double(final_grn[0]) + ", " +
                  io::format_double(final_grn[1]) + ")");

  // overexpression arm: constant input, then removal
  models::GrnParams forced = grn;
  forced.u_i = u_over;
  const OdeSystem forced_sys = models::build_grn(forced, models::GrnControl::open);
  const Trajectory over1 =
      integrate(forced_sys, std::vector<double>{triple.somatic[0], triple.somatic[1]},
                0.0, t_off, cfg);
  const Trajectory over2 =
      integrate(bare, over1.back_state(), t_off, t_off + meta.t_settle, cfg2);
  const std::vector<double> over_final = newton_refine(bare, over2.back_state()).point;
  add_verdict(report, "overexpression_arm_lands_high",
              max_abs_diff(over_final, triple.high) <= 1e-5,
              "final state (" + io::format_double(over_final[0]) + ", " +
                  io::format_double(over_final[1]) + ")");

  io::CsvTable controlled;
  controlled.header = {"t", "m_i", "mu", "x_o", "x_n"};
  auto append_rows = [&](const Trajectory& traj) {
    for (std::size_t i = 0; i < traj.size(); ++i)
      controlled.rows.push_back({traj.times[i], traj.value(i, 0), traj.value(i, 1),
                                 traj.value(i, 2), traj.value(i, 3)});
  };
  append_rows(phase1);
  append_rows(phase2);
  report.tables.emplace_back("controlled", controlled);

  io::CsvTable over_table;
  over_table.header = {"t", "x_o", "x_n"};
  for (const Trajectory* traj : {&over1, &over2})
    for (std::size_t i = 0; i < traj->size(); ++i)
      over_table.rows.push_back(
          {traj->times[i], traj->value(i, 0), traj->value(i, 1)});
  report.tables.emplace_back("overexpression", over_table);

  auto concat = [](const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
  };
  const std::vector<double> t_ctrl = concat(phase1.times, phase2.times);
  const std::vector<double> t_over = concat(over1.times, over2.times);
  const io::Series series[] = {
      {"x_o_controlled", t_ctrl, concat(phase1.column(2), phase2.column(2))},
      {"x_n_controlled", t_ctrl, concat(phase1.column(3), phase2.column(3))},
      {"x_o_overexpression", t_over, concat(over1.column(0), over2.column(0))},
      {"x_n_overexpression", t_over, concat(over1.column(1), over2.column(1))}};
  report.figures.emplace_back(
      "trajectories",
      io::emit_svg(series, {"reprogramming trajectories", "t", "level"}));
}

// ------------------------------------------- repro_dosage_compensation

void run_repro_dosage_compensation(ExperimentReport& report, OverrideReader& reader) {
  const models::GrnParams grn = models::reference_grn();
  models::ReproParams repro = models::reference_repro();
  const double sigma = reader.number("sigma", 0.5);
  const auto n = static_cast<std::size_t>(reader.number("n", 2000.0));
  const std::uint64_t seed = reader.seed(kDefaultSeed);
  const double H = reader.number("H", 0.5 * grn.bound_H_O());
  reader.finish();
  resolve(report, "sigma", sigma);
  resolve(report, "n", static_cast<double>(n));
  resolve(report, "seed", static_cast<double>(seed));
  resolve(report, "H", H);

  const double gains[3] = {10.0, 100.0, 1000.0};
  std::vector<analysis::EnsembleSummary> summaries;
  for (double G : gains) {
    models::ReproParams r = repro;
    r.G = G;
    summaries.push_back(analysis::ensemble_run(
        [&](double d) {
          models::ReproParams sample = r;
          sample.d = d;
          return models::repro_steady_state(sample, H).x_i;
        },
        n, seed, sigma));
  }

  io::CsvTable summary;
  summary.header = {"g", "mean", "cv"};
  for (std::size_t k = 0; k < 3; ++k)
    summary.rows.push_back({gains[k], summaries[k].mean, summaries[k].cv});
  report.tables.emplace_back("dosage_summary", summary);

  io::CsvTable hist;
  hist.header = {"bin_center_g10", "count_g10", "bin_center_g100", "count_g100",
                 "bin_center_g1000", "count_g1000"};
  for (std::size_t b = 0; b < summaries[0].bin_counts.size(); ++b) {
    std::vector<double> row;
    for (const auto& s : summaries) {
      row.push_back(0.5 * (s.bin_edges[b] + s.bin_edges[b + 1]));
      row.push_back(static_cast<double>(s.bin_counts[b]));
    }
    hist.rows.push_back(row);
  }
  report.tables.emplace_back("dosage_hist", hist);

  std::vector<io::Series> series;
  const char* labels[3] = {"g_10", "g_100", "g_1000"};
  for (std::size_t k = 0; k < 3; ++k) {
    io::Series s{labels[k], {}, {}};
    for (std::size_t b = 0; b < summaries[k].bin_counts.size(); ++b) {
      s.x.push_back(0.5 * (summaries[k].bin_edges[b] + summaries[k].bin_edges[b + 1]));
      s.y.push_back(static_cast<double>(summaries[k].bin_counts[b]));
    }
    series.push_back(std::move(s));
  }
  report.figures.emplace_back(
      "dosage", io::emit_svg(series, {"dosage compensation", "x_i", "cells"}));

  add_verdict(report, "cv_decreases_with_gain",
              summaries[0].cv > summaries[1].cv && summaries[1].cv > summaries[2].cv,
              "cv " + io::format_double(summaries[0].cv) + " > " +
                  io::format_double(summaries[1].cv) + " > " +
                  io::format_double(summaries[2].cv));
  add_verdict(report, "cv_small_at_high_gain", summaries[2].cv <= 0.02,
              "cv " + io::format_double(summaries[2].cv) + " at G = 1000");
}

using ScenarioFn = void (*)(ExperimentReport&, OverrideReader&);

struct ScenarioDef {
  ScenarioInfo info;
  ScenarioFn run;
};

const std::vector<ScenarioDef>& scenario_defs() {
  static const std::vector<ScenarioDef> defs = {
      {{"qic_step", "closed vs open loop response to a transcriptional step", "Fig. 4b"},
       run_qic_step},
      {{"ffwd_resource_titration",
        "feedforward output under progressive resource sequestration", "Fig. 7b"},
       run_ffwd_resource_titration},
      {{"ffwd_copy_number", "output distributions under copy-number variation",
        "Fig. 7d"},
       run_ffwd_copy_number},
      {{"ffwd_hidden_integral", "memory-variable diagnostics of the feedforward loop",
        "Sec. 3.2"},
       run_ffwd_hidden_integral},
      {{"grn_bifurcation", "equilibria of the network as overexpression varies",
        "Fig. 10c"},
       run_grn_bifurcation},
      {{"grn_highgain", "clamp trajectory against the analytic envelope", "Sec. 4.1"},
       run_grn_highgain},
      {{"repro_trajectories", "coupled reprogramming run with a failure-mode arm",
        "Fig. 11b"},
       run_repro_trajectories},
      {{"repro_dosage_compensation", "output histograms across copy-number draws",
        "Sec. 4.2"},
       run_repro_dosage_compensation},
  };
  return defs;
}

}  // namespace

bool ExperimentReport::all_passed() const {
  return std::all_of(verdicts.begin(), verdicts.end(),
                     [](const Verdict& v) { return v.pass; });
}

const std::vector<ScenarioInfo>& list_scenarios() {
  static const std::vector<ScenarioInfo> infos = [] {
    std::vector<ScenarioInfo> out;
    for (const ScenarioDef& def : scenario_defs()) out.push_back(def.info);
    return out;
  }();
  return infos;
}

ExperimentReport run_scenario(const Scenario& scenario) {
  const ScenarioDef* def = nullptr;
  for (const ScenarioDef& d : scenario_defs())
    if (d.info.id == scenario.id) def = &d;
  if (!def) throw std::invalid_argument("unknown scenario id '" + scenario.id + "'");

  ExperimentReport report;
  report.scenario_id = scenario.id;
  OverrideReader reader(scenario.overrides);
  const auto start = std::chrono::steady_clock::now();
  try {
    def->run(report, reader);
    reader.finish();
  } catch (const OverrideError&) {
    throw;
  } catch (const std::exception& e) {
    report.verdicts.push_back({"pipeline", false, e.what()});
  }
  report.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

void write_report(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, table] : report.tables) {
    std::ofstream out(dir / (name + ".csv"), std::ios::binary);
    out << io::emit_csv(table);
  }
  for (const auto& [name, svg] : report.figures) {
    std::ofstream out(dir / (name + ".svg"), std::ios::binary);
    out << svg;
  }
  {
    std::ofstream out(dir / "resolved.cfg", std::ios::binary);
    out << "[resolved]\n";
    for (const auto& [key, value] : report.resolved) out << key << " = " << value << "\n";
  }
  {
    std::ofstream out(dir / "report.txt", std::ios::binary);
    for (const Verdict& v : report.verdicts)
      out << (v.pass ? "PASS" : "FAIL") << ' ' << v.id << ' ' << v.message << '\n';
  }
}

}  // namespace biocircuit::experiments
