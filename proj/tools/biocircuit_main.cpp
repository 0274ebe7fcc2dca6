// Command-line front end: simulate, equilibria, bifurcate, ensemble, and the
// scenario runner. Exit codes: 0 success (and all verdicts passing), 1 failed
// verdict, 2 usage or config error.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "biocircuit/analysis/bifurcation.hpp"
#include "biocircuit/analysis/ensemble.hpp"
#include "biocircuit/experiments/scenario.hpp"
#include "biocircuit/io/config.hpp"
#include "biocircuit/io/csv.hpp"
#include "biocircuit/io/svg.hpp"
#include "biocircuit/ode/integrator.hpp"

namespace {

namespace fs = std::filesystem;
using namespace biocircuit;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Args {
  std::vector<std::string> positional;
  std::map<std::string, std::string> flags;
  std::vector<std::string> sets;  // repeated --set key=value
};

Args parse_args(int argc, char** argv, int start) {
  Args args;
  for (int i = start; i < argc; ++i) {
    const std::string a = argv[i];
    if (a.rfind("--", 0) == 0) {
      const std::string name = a.substr(2);
      if (name.empty()) throw UsageError("empty flag '--'");
      if (i + 1 >= argc) throw UsageError("flag '--" + name + "' needs a value");
      const std::string value = argv[++i];
      if (name == "set")
        args.sets.push_back(value);
      else if (args.flags.count(name))
        throw UsageError("flag '--" + name + "' given twice");
      else
        args.flags[name] = value;
    } else {
      args.positional.push_back(a);
    }
  }
  return args;
}

std::string require_flag(const Args& args, const std::string& name) {
  const auto it = args.flags.find(name);
  if (it == args.flags.end()) throw UsageError("missing required flag '--" + name + "'");
  return it->second;
}

double require_number(const Args& args, const std::string& name) {
  const std::string text = require_flag(args, name);
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size())
    throw UsageError("flag '--" + name + "' needs a numeric value, got '" + text + "'");
  return v;
}

// CSV column names are [a-z0-9_]; fold anything else
std::string column_name(const std::string& raw) {
  std::string out;
  for (char c : raw) {
    if (c >= 'A' && c <= 'Z')
      out += static_cast<char>(c - 'A' + 'a');
    else if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')
      out += c;
    else
      out += '_';
  }
  return out.empty() ? "value" : out;
}

io::RunSpec load_config(const Args& args) {
  const fs::path path = require_flag(args, "config");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open config file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return io::parse_config(buffer.str());
}

void write_file(const fs::path& path, const std::string& bytes) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << bytes;
}

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("BIOCIRCUIT_SEED");
  if (!raw || !*raw) return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (*end) throw UsageError("BIOCIRCUIT_SEED must be a nonnegative integer");
  return static_cast<std::uint64_t>(v);
}

int cmd_simulate(const Args& args) {
  const io::RunSpec spec = load_config(args);
  const fs::path out_dir = args.flags.count("out") ? args.flags.at("out") : spec.output_dir;

  const ode::OdeSystem sys = spec.build();
  const ode::Trajectory traj =
      integrate(sys, spec.initial_state(), 0.0, spec.t_end, spec.integrator);

  io::CsvTable table;
  table.header.push_back("t");
  for (const std::string& name : sys.names) table.header.push_back(column_name(name));
  std::vector<io::Series> series;
  for (int j = 0; j < sys.dim; ++j) series.push_back({sys.names[j], traj.times, traj.column(j)});
  for (std::size_t i = 0; i < traj.size(); ++i) {
    std::vector<double> row{traj.times[i]};
    for (int j = 0; j < sys.dim; ++j) row.push_back(traj.value(i, j));
    table.rows.push_back(std::move(row));
  }
  write_file(out_dir / "trajectory.csv", emit_csv(table));
  write_file(out_dir / "trajectory.svg",
             emit_svg(series, {io::to_string(spec.family) + " trajectory", "t", "level"}));
  std::cout << "simulate: family " << io::to_string(spec.family) << ", " << traj.size()
            << " samples to t = " << spec.t_end << ", wrote " << (out_dir / "trajectory.csv").string()
            << "\n";
  return 0;
}

int cmd_equilibria(const Args& args) {
  const io::RunSpec spec = load_config(args);
  const ode::OdeSystem sys = spec.build();
  ode::Box box = spec.sweep.box;
  if (box.lo.empty()) box = spec.default_box();
  const std::vector<ode::Equilibrium> eqs =
      find_equilibria(sys, box, spec.sweep.n_starts);
  std::cout << "equilibria: " << eqs.size() << " found for family "
            << io::to_string(spec.family) << "\n";
  for (const ode::Equilibrium& e : eqs) {
    std::cout << "  " << to_string(e.stability) << " (";
    for (std::size_t i = 0; i < e.point.size(); ++i)
      std::cout << (i ? ", " : "") << io::format_double(e.point[i]);
    std::cout << ") residual " << io::format_double(e.residual) << "\n";
  }
  return 0;
}

int cmd_bifurcate(const Args& args) {
  const io::RunSpec spec = load_config(args);
  const std::string param = require_flag(args, "param");
  const double from = require_number(args, "from");
  const double to = require_number(args, "to");
  const double points_raw = require_number(args, "points");
  const int points = static_cast<int>(points_raw);
  if (points < 2 || points_raw != points) throw UsageError("flag '--points' needs an integer >= 2");
  if (!(to > from)) throw UsageError("flag '--to' must exceed '--from'");
  const fs::path out_dir = args.flags.count("out") ? args.flags.at("out") : spec.output_dir;

  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    grid[static_cast<std::size_t>(i)] = from + (to - from) * i / (points - 1);
  ode::Box box = spec.sweep.box;
  if (box.lo.empty()) box = spec.default_box();

  std::function<ode::OdeSystem(double)> family;
  try {
    family = spec.family_closure(param);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const analysis::BifurcationDiagram diagram =
      analysis::bifurcation_sweep(family, param, grid, box, spec.sweep.n_starts);

  io::CsvTable table;
  table.header = {column_name(param), "branch", "stable"};
  const ode::OdeSystem probe = family(grid[0]);
  for (const std::string& name : probe.names) table.header.push_back(column_name(name));
  for (std::size_t k = 0; k < diagram.grid.size(); ++k)
    for (std::size_t j = 0; j < diagram.branches[k].size(); ++j) {
      const ode::Equilibrium& e = diagram.branches[k][j];
      std::vector<double> row{diagram.grid[k],
                              static_cast<double>(diagram.branch_ids[k][j]),
                              e.stability == ode::Stability::stable ? 1.0 : 0.0};
      row.insert(row.end(), e.point.begin(), e.point.end());
      table.rows.push_back(std::move(row));
    }
  write_file(out_dir / "bifurcation.csv", emit_csv(table));

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
  write_file(out_dir / "bifurcation.svg",
             emit_svg(series, {"equilibria vs " + param, param, probe.names[0]}));

  std::cout << "bifurcate: " << diagram.branch_count << " branches, "
            << diagram.detected_events.size() << " stability events\n";
  for (const auto& [lo, hi] : diagram.detected_events)
    std::cout << "  stable count changes in [" << io::format_double(lo) << ", "
              << io::format_double(hi) << "]\n";
  return 0;
}

int cmd_ensemble(const Args& args) {
  const io::RunSpec spec = load_config(args);
  const fs::path out_dir = args.flags.count("out") ? args.flags.at("out") : spec.output_dir;
  std::size_t n = spec.ensemble.n;
  double sigma = spec.ensemble.sigma;
  std::uint64_t seed = spec.ensemble.seed;
  if (const auto env = env_seed()) seed = *env;
  if (args.flags.count("n")) {
    const double v = require_number(args, "n");
    if (v < 2 || v != static_cast<std::size_t>(v)) throw UsageError("flag '--n' needs an integer >= 2");
    n = static_cast<std::size_t>(v);
  }
  if (args.flags.count("sigma")) {
    sigma = require_number(args, "sigma");
    if (!(sigma > 0)) throw UsageError("flag '--sigma' must be positive");
  }
  if (args.flags.count("seed")) {
    const double v = require_number(args, "seed");
    if (v < 0 || v != static_cast<std::uint64_t>(v)) throw UsageError("flag '--seed' needs a nonnegative integer");
    seed = static_cast<std::uint64_t>(v);
  }

  const analysis::DisturbedFamily family = spec.disturbed_family();
  const double H0 = spec.dist.H_GRN.value(0.0);
  auto output = [&](double d) -> double {
    if (family.steady_output) return family.steady_output(d, 1.0, H0);
    const ode::OdeSystem sys = family.build(d, 1.0, H0);
    const ode::SteadyStateResult res =
        simulate_to_steady_state(sys, family.x0, spec.integrator);
    if (!res.converged)
      throw std::runtime_error("no steady state at sampled disturbance " +
                               io::format_double(d));
    return res.equilibrium.point[static_cast<std::size_t>(family.output_coord)];
  };
  const analysis::EnsembleSummary summary = analysis::ensemble_run(output, n, seed, sigma);

  io::CsvTable hist;
  hist.header = {"bin_center", "count"};
  for (std::size_t b = 0; b < summary.bin_counts.size(); ++b)
    hist.rows.push_back({0.5 * (summary.bin_edges[b] + summary.bin_edges[b + 1]),
                         static_cast<double>(summary.bin_counts[b])});
  write_file(out_dir / "ensemble.csv", emit_csv(hist));
  const io::Series series[] = {{"count", hist.rows.empty() ? std::vector<double>{}
                                                           : [&] {
                                  std::vector<double> xs;
                                  for (auto& r : hist.rows) xs.push_back(r[0]);
                                  return xs;
                                }(),
                                [&] {
                                  std::vector<double> ys;
                                  for (auto& r : hist.rows) ys.push_back(r[1]);
                                  return ys;
                                }()}};
  write_file(out_dir / "histogram.svg",
             emit_svg(series, {"sampled output distribution", "output", "count"}));
  std::cout << "ensemble: n = " << summary.n << ", seed = " << summary.seed
            << ", mean = " << io::format_double(summary.mean)
            << ", cv = " << io::format_double(summary.cv) << "\n";
  return 0;
}

int cmd_scenario(const Args& args) {
  if (args.positional.empty())
    throw UsageError("scenario needs a subcommand: list or run");
  const std::string& sub = args.positional[0];
  if (sub == "list") {
    for (const experiments::ScenarioInfo& info : experiments::list_scenarios())
      std::cout << info.id << "  " << info.description << " (" << info.figure << ")\n";
    return 0;
  }
  if (sub != "run") throw UsageError("unknown scenario subcommand '" + sub + "'");
  if (args.positional.size() < 2) throw UsageError("scenario run needs a scenario id");

  experiments::Scenario scenario;
  scenario.id = args.positional[1];
  for (const std::string& kv : args.sets) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw UsageError("flag '--set' needs key=value, got '" + kv + "'");
    scenario.overrides[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  if (!scenario.overrides.count("seed")) {
    if (const auto env = env_seed())
      scenario.overrides["seed"] = std::to_string(*env);
  }

  experiments::ExperimentReport report;
  try {
    report = experiments::run_scenario(scenario);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const fs::path out_dir = args.flags.count("out")
                               ? fs::path(args.flags.at("out"))
                               : fs::path("reports") / scenario.id;
  experiments::write_report(report, out_dir);
  for (const experiments::Verdict& v : report.verdicts)
    std::cout << (v.pass ? "PASS" : "FAIL") << ' ' << v.id << ' ' << v.message << "\n";
  std::cout << "scenario " << scenario.id << ": wrote " << out_dir.string() << " in "
            << io::format_double(report.duration_seconds) << " s\n";
  return report.all_passed() ? 0 : 1;
}

int dispatch(int argc, char** argv) {
  if (argc < 2)
    throw UsageError(
        "usage: biocircuit <simulate|equilibria|bifurcate|ensemble|scenario> ...");
  const std::string cmd = argv[1];
  // scenario keeps positionals (list / run ID); the others take flags only
  const Args args = parse_args(argc, argv, 2);
  if (cmd == "simulate") return cmd_simulate(args);
  if (cmd == "equilibria") return cmd_equilibria(args);
  if (cmd == "bifurcate") return cmd_bifurcate(args);
  if (cmd == "ensemble") return cmd_ensemble(args);
  if (cmd == "scenario") return cmd_scenario(args);
  throw UsageError("unknown command '" + cmd + "'");
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const io::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
