#pragma once

#include <array>
#include <string>

#include "biocircuit/models/ffwd.hpp"
#include "biocircuit/models/grn.hpp"
#include "biocircuit/models/plant.hpp"
#include "biocircuit/models/qic.hpp"
#include "biocircuit/models/repro.hpp"
#include "biocircuit/ode/equilibria.hpp"

namespace biocircuit::models {

// Raw text of the versioned constants files. The same bytes ship under
// core/data/; the embedded copies are generated from those files at
// configure time, so the two cannot disagree.
const std::string& qic_reference_text();
const std::string& ffwd_reference_text();
const std::string& grn_reference_text();
const std::string& repro_reference_text();

QicParams reference_qic();
PlantParams reference_plant();
FfwdParams reference_ffwd();
GrnParams reference_grn();
ReproParams reference_repro();

struct GrnReferenceMeta {
  ode::Box box;                    // equilibrium search region
  int n_starts = 64;
  double u_large = 3.0;            // overexpression leaving one stable state
  double u_sweep_max = 3.0;
  int sweep_points = 61;
  std::array<double, 2> somatic{}; // approximate somatic state
};
GrnReferenceMeta grn_reference_meta();

struct ReproReferenceMeta {
  double t_off = 40.0;        // control-removal time in the coupled scenario
  double t_settle = 60.0;     // post-removal horizon
  double u_overexpress = 3.0; // constant input for the failure-mode arm
};
ReproReferenceMeta repro_reference_meta();

}  // namespace biocircuit::models
