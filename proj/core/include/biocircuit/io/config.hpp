#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "biocircuit/analysis/adaptation.hpp"
#include "biocircuit/models/ffwd.hpp"
#include "biocircuit/models/grn.hpp"
#include "biocircuit/models/plant.hpp"
#include "biocircuit/models/qic.hpp"
#include "biocircuit/models/repro.hpp"
#include "biocircuit/models/schedule.hpp"
#include "biocircuit/io/kv.hpp"
#include "biocircuit/ode/equilibria.hpp"
#include "biocircuit/ode/types.hpp"

namespace biocircuit::io {

enum class ModelFamily {
  plant,
  qic_closed,
  qic_open,
  ffwd_ern,
  ffwd_mirna,
  grn,
  grn_highgain,
  repro,
  repro_coupled,
};

std::string to_string(ModelFamily family);
ModelFamily family_from_string(std::string_view name);

struct SweepSpec {
  std::string param = "d";
  double from = 0.1;
  double to = 10.0;
  int points = 41;
  int n_starts = 48;
  ode::Box box;  // empty = family default
};

struct EnsembleSpec {
  std::string param = "d";
  double sigma = 0.5;
  std::size_t n = 10000;
  std::uint64_t seed = 12345;
};

/// A fully validated run description: the model family with its parameters,
/// disturbances, integrator settings, and the sweep/ensemble/output options.
struct RunSpec {
  ModelFamily family = ModelFamily::plant;
  models::PlantParams plant;
  models::QicParams qic;
  models::FfwdParams ffwd;
  models::GrnParams grn;
  models::ReproParams repro;
  models::DisturbanceInputs dist;
  ode::IntegratorConfig integrator;
  double t_end = 50.0;
  std::vector<double> x0;  // empty = zeros
  SweepSpec sweep;
  EnsembleSpec ensemble;
  std::string output_dir = "out";

  ode::OdeSystem build() const;
  std::vector<double> initial_state() const;
  /// Default equilibrium-search box for this family.
  ode::Box default_box() const;
  /// Constant-disturbance view of the family for adaptation/ensemble work.
  analysis::DisturbedFamily disturbed_family() const;
  /// Rebuild closure for a named sweepable parameter ("d" sweeps the
  /// constant d1 channel). Throws std::invalid_argument on unknown names.
  std::function<ode::OdeSystem(double)> family_closure(const std::string& param) const;
};

/// True if `key` names a numeric model parameter of the run's family
/// ("[model]" keys; "grn.<key>" reaches the network block of repro_coupled).
bool set_model_param(RunSpec& spec, const std::string& key, double value);

/// Parse and fully validate config text. Throws ConfigError with the
/// offending line; never partially accepts.
RunSpec parse_config(std::string_view text);

}  // namespace biocircuit::io
