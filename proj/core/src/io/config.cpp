#include "biocircuit/io/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "biocircuit/models/reference.hpp"

namespace biocircuit::io {
namespace {

struct ParamSlot {
  std::string key;
  double* ptr;
  bool positive;  // false = nonnegative
};

std::vector<ParamSlot> plant_slots(models::PlantParams& p) {
  return {{"alpha", &p.alpha, true},  {"beta", &p.beta, true},
          {"R_TX", &p.R_TX, true},    {"R_TL", &p.R_TL, true},
          {"delta", &p.delta, true},  {"gamma", &p.gamma, true}};
}

std::vector<ParamSlot> qic_slots(models::QicParams& q) {
  return {{"k1", &q.k1, true},           {"k2", &q.k2, true},
          {"K1", &q.K1, true},           {"K2", &q.K2, true},
          {"gamma_u", &q.gamma_u, true}, {"v", &q.v, true},
          {"u_tot", &q.u_tot, false},    {"K_act", &q.K_act, true},
          {"a_act", &q.a_act, true},     {"n_act", &q.n_act, true},
          {"w_open", &q.w_open, false}};
}

std::vector<ParamSlot> ffwd_slots(models::FfwdParams& f) {
  return {{"alpha_bar", &f.alpha_bar, true}, {"delta_bar", &f.delta_bar, true},
          {"beta_bar", &f.beta_bar, true},   {"gamma_bar", &f.gamma_bar, true},
          {"g", &f.g, true},                 {"alpha", &f.alpha, true},
          {"beta", &f.beta, true},           {"delta", &f.delta, false},
          {"gamma", &f.gamma, true}};
}

std::vector<ParamSlot> grn_slots(models::GrnParams& g) {
  return {{"b_O", &g.b_O, true},           {"a_self", &g.a_self, true},
          {"K_self", &g.K_self, true},     {"a_comp_O", &g.a_comp_O, true},
          {"K_comp_O", &g.K_comp_O, true}, {"b_N", &g.b_N, true},
          {"a_comp_N", &g.a_comp_N, true}, {"K_comp_N", &g.K_comp_N, true},
          {"K_rep", &g.K_rep, true},       {"n_hill", &g.n_hill, true},
          {"gamma", &g.gamma, true},       {"u_i", &g.u_i, false},
          {"G", &g.G, false},              {"x_star", &g.x_star, false}};
}

std::vector<ParamSlot> repro_slots(models::ReproParams& r) {
  return {{"G", &r.G, true},           {"alpha", &r.alpha, true},
          {"beta", &r.beta, true},     {"c", &r.c, true},
          {"delta", &r.delta, true},   {"delta_bar", &r.delta_bar, true},
          {"kappa", &r.kappa, true},   {"gamma", &r.gamma, true},
          {"d", &r.d, true}};
}

std::vector<ParamSlot> model_slots(RunSpec& spec) {
  std::vector<ParamSlot> slots;
  auto append = [&](std::vector<ParamSlot> more) {
    for (auto& s : more) slots.push_back(s);
  };
  switch (spec.family) {
    case ModelFamily::plant:
      append(plant_slots(spec.plant));
      break;
    case ModelFamily::qic_closed:
    case ModelFamily::qic_open:
      append(plant_slots(spec.plant));
      append(qic_slots(spec.qic));
      break;
    case ModelFamily::ffwd_ern:
    case ModelFamily::ffwd_mirna:
      append(ffwd_slots(spec.ffwd));
      break;
    case ModelFamily::grn:
    case ModelFamily::grn_highgain:
      append(grn_slots(spec.grn));
      break;
    case ModelFamily::repro:
    case ModelFamily::repro_coupled:
      append(repro_slots(spec.repro));
      break;
  }
  return slots;
}

void apply_defaults(RunSpec& spec) {
  switch (spec.family) {
    case ModelFamily::plant:
      spec.plant = models::PlantParams{};
      break;
    case ModelFamily::qic_closed:
    case ModelFamily::qic_open:
      spec.plant = models::reference_plant();
      spec.qic = models::reference_qic();
      break;
    case ModelFamily::ffwd_ern:
      spec.ffwd = models::reference_ffwd();
      spec.ffwd.variant = models::FfwdVariant::ern;
      break;
    case ModelFamily::ffwd_mirna:
      spec.ffwd = models::reference_ffwd();
      spec.ffwd.variant = models::FfwdVariant::microrna;
      break;
    case ModelFamily::grn:
      spec.grn = models::reference_grn();
      break;
    case ModelFamily::grn_highgain:
      spec.grn = models::reference_grn();
      spec.grn.G = 100.0;
      break;
    case ModelFamily::repro:
      spec.repro = models::reference_repro();
      break;
    case ModelFamily::repro_coupled:
      spec.repro = models::reference_repro();
      spec.grn = models::reference_grn();
      break;
  }
}

}  // namespace

std::string to_string(ModelFamily family) {
  switch (family) {
    case ModelFamily::plant: return "plant";
    case ModelFamily::qic_closed: return "qic_closed";
    case ModelFamily::qic_open: return "qic_open";
    case ModelFamily::ffwd_ern: return "ffwd_ern";
    case ModelFamily::ffwd_mirna: return "ffwd_mirna";
    case ModelFamily::grn: return "grn";
    case ModelFamily::grn_highgain: return "grn_highgain";
    case ModelFamily::repro: return "repro";
    case ModelFamily::repro_coupled: return "repro_coupled";
  }
  return "plant";
}

ModelFamily family_from_string(std::string_view name) {
  for (ModelFamily f :
       {ModelFamily::plant, ModelFamily::qic_closed, ModelFamily::qic_open,
        ModelFamily::ffwd_ern, ModelFamily::ffwd_mirna, ModelFamily::grn,
        ModelFamily::grn_highgain, ModelFamily::repro, ModelFamily::repro_coupled})
    if (to_string(f) == name) return f;
  throw std::invalid_argument("unknown model family '" + std::string(name) + "'");
}

bool set_model_param(RunSpec& spec, const std::string& key, double value) {
  std::string bare = key;
  bool grn_block = false;
  if (bare.rfind("grn.", 0) == 0) {
    bare = bare.substr(4);
    grn_block = true;
  }
  if (grn_block) {
    if (spec.family != ModelFamily::repro_coupled && spec.family != ModelFamily::grn &&
        spec.family != ModelFamily::grn_highgain)
      return false;
    for (const ParamSlot& s : grn_slots(spec.grn)) {
      if (s.key == bare) {
        *s.ptr = value;
        return true;
      }
    }
    return false;
  }
  for (const ParamSlot& s : model_slots(spec)) {
    if (s.key == bare) {
      *s.ptr = value;
      return true;
    }
  }
  return false;
}

ode::OdeSystem RunSpec::build() const {
  switch (family) {
    case ModelFamily::plant:
      return models::build_plant(plant, dist);
    case ModelFamily::qic_closed:
      return models::build_qic(qic, plant, dist, models::QicLoop::closed);
    case ModelFamily::qic_open:
      return models::build_qic(qic, plant, dist, models::QicLoop::open);
    case ModelFamily::ffwd_ern:
    case ModelFamily::ffwd_mirna:
      return models::build_ffwd(ffwd, dist);
    case ModelFamily::grn:
      return models::build_grn(grn, models::GrnControl::open);
    case ModelFamily::grn_highgain:
      return models::build_grn(grn, models::GrnControl::highgain);
    case ModelFamily::repro:
      return models::build_repro(repro, dist.H_GRN);
    case ModelFamily::repro_coupled:
      return models::build_repro_coupled(repro, grn);
  }
  throw std::logic_error("unreachable model family");
}

std::vector<double> RunSpec::initial_state() const {
  const ode::OdeSystem sys = build();
  if (x0.empty()) return std::vector<double>(static_cast<std::size_t>(sys.dim), 0.0);
  if (x0.size() != static_cast<std::size_t>(sys.dim))
    throw std::invalid_argument("x0 has " + std::to_string(x0.size()) +
                                " entries but the model has dimension " +
                                std::to_string(sys.dim));
  return x0;
}

ode::Box RunSpec::default_box() const {
  const models::GrnReferenceMeta meta = models::grn_reference_meta();
  ode::Box box;
  switch (family) {
    case ModelFamily::grn:
    case ModelFamily::grn_highgain:
      return meta.box;
    case ModelFamily::qic_closed:
    case ModelFamily::qic_open: {
      const double m_hi = 3.0 * std::max(1.0, qic.a_act * plant.R_TX / plant.delta);
      const double x_hi = 3.0 * std::max(1.0, qic.a_act * plant.R_TX * plant.kappa() /
                                                  (plant.delta * plant.gamma));
      box.lo = {0.0, 0.0, 0.0};
      box.hi = {m_hi, x_hi, qic.u_total()};
      return box;
    }
    case ModelFamily::repro:
    case ModelFamily::repro_coupled: {
      const double H_hi = family == ModelFamily::repro
                              ? dist.H_GRN.max_value()
                              : grn.bound_H_O();
      const double denom = repro.delta + repro.c * repro.G * repro.beta * repro.d /
                                             repro.delta_bar;
      const double m_hi = 3.0 * (H_hi + repro.G * repro.alpha * repro.d) / denom + 1.0;
      const double mu_hi = 3.0 * repro.d * repro.G * repro.beta / repro.delta_bar + 1.0;
      const double x_hi = 3.0 * repro.kappa * m_hi / repro.gamma + 1.0;
      box.lo.assign(family == ModelFamily::repro ? 3 : 4, 0.0);
      box.hi = {m_hi, mu_hi, x_hi};
      if (family == ModelFamily::repro_coupled) box.hi.push_back(meta.box.hi[1]);
      return box;
    }
    default: {
      const int dim = build().dim;
      box.lo.assign(static_cast<std::size_t>(dim), 0.0);
      box.hi.assign(static_cast<std::size_t>(dim), 10.0);
      return box;
    }
  }
}

analysis::DisturbedFamily RunSpec::disturbed_family() const {
  analysis::DisturbedFamily fam;
  const RunSpec base = *this;

  fam.build = [base](double d1, double d2, double H) {
    RunSpec s = base;
    if (s.family == ModelFamily::repro || s.family == ModelFamily::repro_coupled) {
      s.repro.d = base.repro.d * d1 * d2;
      s.dist.H_GRN = models::Schedule::constant(H);
    } else {
      s.dist.d1 = models::Schedule::constant(d1);
      s.dist.d2 = models::Schedule::constant(d2);
      s.dist.H_GRN = models::Schedule::constant(H);
      s.dist.r = models::Schedule::constant(base.dist.r.value(0.0));
    }
    return s.build();
  };
  fam.x0 = initial_state();

  const ode::OdeSystem sys = build();
  const char* output = "X";
  if (family == ModelFamily::repro) output = "x_i";
  if (family == ModelFamily::repro_coupled || family == ModelFamily::grn ||
      family == ModelFamily::grn_highgain)
    output = "x_O";
  fam.output_coord = sys.index_of(output);

  switch (family) {
    case ModelFamily::plant: {
      const models::PlantParams p = plant;
      const double r0 = dist.r.value(0.0);
      fam.steady_output = [p, r0](double d1, double d2, double H) {
        return models::plant_steady_state(p, d1, d2, H, r0)[1];
      };
      break;
    }
    case ModelFamily::ffwd_ern:
    case ModelFamily::ffwd_mirna: {
      const models::FfwdParams f = ffwd;
      fam.steady_output = [f](double d1, double d2, double) {
        return models::ffwd_steady_state(f, d1, d2).X;
      };
      break;
    }
    case ModelFamily::repro: {
      const models::ReproParams r = repro;
      fam.steady_output = [r](double d1, double d2, double H) {
        models::ReproParams scaled = r;
        scaled.d = r.d * d1 * d2;
        return models::repro_steady_state(scaled, H).x_i;
      };
      break;
    }
    default:
      break;  // simulate
  }
  return fam;
}

std::function<ode::OdeSystem(double)> RunSpec::family_closure(
    const std::string& param) const {
  const RunSpec base = *this;
  if (param == "d") {
    if (family == ModelFamily::grn || family == ModelFamily::grn_highgain)
      throw std::invalid_argument(
          "the network families take no disturbance channel; sweep a model "
          "parameter such as u_i instead");
    return [base](double value) {
      RunSpec s = base;
      if (s.family == ModelFamily::repro || s.family == ModelFamily::repro_coupled)
        s.repro.d = value;
      else
        s.dist.d1 = models::Schedule::constant(value);
      return s.build();
    };
  }
  {
    RunSpec probe = base;
    if (!set_model_param(probe, param, 1.0))
      throw std::invalid_argument("parameter '" + param + "' is not sweepable for family " +
                                  to_string(family));
  }
  return [base, param](double value) {
    RunSpec s = base;
    set_model_param(s, param, value);
    return s.build();
  };
}

RunSpec parse_config(std::string_view text) {
  const KvFile file = KvFile::parse(text);

  static const std::set<std::string> known_sections = {
      "model", "grn", "disturbances", "integrator", "sweep", "ensemble", "output"};
  for (const auto& [name, line] : file.sections())
    if (!known_sections.count(name))
      throw ConfigError(line, "unknown section [" + name + "]");

  if (!file.has_section("model"))
    throw ConfigError(0, "config is missing the [model] section");
  const KvEntry* family_entry = file.find("model", "family");
  if (!family_entry)
    throw ConfigError(0, "the [model] section is missing the 'family' key");

  RunSpec spec;
  try {
    spec.family = family_from_string(family_entry->value);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(family_entry->line, e.what());
  }
  apply_defaults(spec);

  // [model]
  for (const KvEntry* e : file.section_entries("model")) {
    if (e->key == "family") continue;
    if (e->key == "x0") {
      spec.x0 = parse_number_list(*e);
      continue;
    }
    bool matched = false;
    for (const ParamSlot& s : model_slots(spec)) {
      if (s.key == e->key) {
        *s.ptr = s.positive ? parse_positive(*e) : parse_nonnegative(*e);
        matched = true;
        break;
      }
    }
    if (!matched)
      throw ConfigError(e->line, "unknown key '" + e->key + "' for model family " +
                                     to_string(spec.family));
  }

  // [grn] block (coupled reprogramming only)
  if (file.has_section("grn")) {
    if (spec.family != ModelFamily::repro_coupled) {
      int line = 0;
      for (const auto& [name, l] : file.sections())
        if (name == "grn") line = l;
      throw ConfigError(line, "[grn] section is only valid for family repro_coupled");
    }
    for (const KvEntry* e : file.section_entries("grn")) {
      bool matched = false;
      for (const ParamSlot& s : grn_slots(spec.grn)) {
        if (s.key == e->key) {
          *s.ptr = s.positive ? parse_positive(*e) : parse_nonnegative(*e);
          matched = true;
          break;
        }
      }
      if (!matched)
        throw ConfigError(e->line, "unknown key '" + e->key + "' in [grn]");
    }
  }

  // [disturbances]
  for (const KvEntry* e : file.section_entries("disturbances")) {
    models::Schedule schedule;
    try {
      schedule = models::Schedule(parse_pair_list(*e));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& ex) {
      throw ConfigError(e->line, ex.what());
    }
    if (e->key == "H_GRN") {
      if (schedule.min_value() < 0.0)
        throw ConfigError(e->line, "'H_GRN' values must be nonnegative");
      spec.dist.H_GRN = schedule;
    } else if (e->key == "r") {
      spec.dist.r = schedule;
    } else if (e->key == "d1" || e->key == "d2") {
      if (!(schedule.min_value() > 0.0))
        throw ConfigError(e->line, "'" + e->key + "' values must be strictly positive");
      (e->key == "d1" ? spec.dist.d1 : spec.dist.d2) = schedule;
    } else {
      throw ConfigError(e->line, "unknown key '" + e->key + "' in [disturbances]");
    }
  }

  // [integrator]
  for (const KvEntry* e : file.section_entries("integrator")) {
    if (e->key == "rtol") spec.integrator.rtol = parse_positive(*e);
    else if (e->key == "atol") spec.integrator.atol = parse_positive(*e);
    else if (e->key == "h_init") spec.integrator.h_init = parse_nonnegative(*e);
    else if (e->key == "h_max") spec.integrator.h_max = parse_nonnegative(*e);
    else if (e->key == "t_max") spec.integrator.t_max = parse_positive(*e);
    else if (e->key == "ss_tol") spec.integrator.ss_tol = parse_positive(*e);
    else if (e->key == "ss_window") {
      const long w = parse_integer(*e);
      if (w < 1) throw ConfigError(e->line, "'ss_window' must be >= 1");
      spec.integrator.ss_window = static_cast<int>(w);
    } else if (e->key == "sample_dt") spec.integrator.sample_dt = parse_nonnegative(*e);
    else if (e->key == "t_end") spec.t_end = parse_positive(*e);
    else throw ConfigError(e->line, "unknown key '" + e->key + "' in [integrator]");
  }

  // [sweep]
  for (const KvEntry* e : file.section_entries("sweep")) {
    if (e->key == "param") spec.sweep.param = e->value;
    else if (e->key == "from") spec.sweep.from = parse_number(*e);
    else if (e->key == "to") spec.sweep.to = parse_number(*e);
    else if (e->key == "points") {
      const long p = parse_integer(*e);
      if (p < 2) throw ConfigError(e->line, "'points' must be >= 2");
      spec.sweep.points = static_cast<int>(p);
    } else if (e->key == "n_starts") {
      const long p = parse_integer(*e);
      if (p < 1) throw ConfigError(e->line, "'n_starts' must be >= 1");
      spec.sweep.n_starts = static_cast<int>(p);
    } else if (e->key == "box_lo") spec.sweep.box.lo = parse_number_list(*e);
    else if (e->key == "box_hi") spec.sweep.box.hi = parse_number_list(*e);
    else throw ConfigError(e->line, "unknown key '" + e->key + "' in [sweep]");
  }

  // [ensemble]
  for (const KvEntry* e : file.section_entries("ensemble")) {
    if (e->key == "param") {
      if (e->value != "d")
        throw ConfigError(e->line, "only the 'd' channel can be sampled");
      spec.ensemble.param = e->value;
    } else if (e->key == "sigma") spec.ensemble.sigma = parse_positive(*e);
    else if (e->key == "n") {
      const long n = parse_integer(*e);
      if (n < 2) throw ConfigError(e->line, "'n' must be >= 2");
      spec.ensemble.n = static_cast<std::size_t>(n);
    } else if (e->key == "seed") {
      const long s = parse_integer(*e);
      if (s < 0) throw ConfigError(e->line, "'seed' must be nonnegative");
      spec.ensemble.seed = static_cast<std::uint64_t>(s);
    } else throw ConfigError(e->line, "unknown key '" + e->key + "' in [ensemble]");
  }

  // [output]
  for (const KvEntry* e : file.section_entries("output")) {
    if (e->key == "dir") spec.output_dir = e->value;
    else throw ConfigError(e->line, "unknown key '" + e->key + "' in [output]");
  }

  // cross-checks that need the whole spec
  if (!spec.x0.empty()) {
    try {
      spec.initial_state();
    } catch (const std::exception& ex) {
      const KvEntry* x0e = file.find("model", "x0");
      throw ConfigError(x0e ? x0e->line : 0, ex.what());
    }
  }
  int model_dim = 0;
  try {
    model_dim = spec.build().dim;
  } catch (const std::exception& ex) {
    throw ConfigError(0, std::string("invalid model: ") + ex.what());
  }
  if (const KvEntry* param = file.find("sweep", "param")) {
    try {
      spec.family_closure(param->value);
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(param->line, ex.what());
    }
  }
  if (!spec.sweep.box.lo.empty() || !spec.sweep.box.hi.empty()) {
    const auto dim = static_cast<std::size_t>(model_dim);
    if (spec.sweep.box.lo.size() != dim || spec.sweep.box.hi.size() != dim) {
      const KvEntry* lo = file.find("sweep", "box_lo");
      const KvEntry* hi = file.find("sweep", "box_hi");
      throw ConfigError(lo ? lo->line : (hi ? hi->line : 0),
                        "sweep box needs one bound per state coordinate (" +
                            std::to_string(dim) + ")");
    }
    try {
      spec.sweep.box.validate(static_cast<int>(dim));
    } catch (const std::exception& ex) {
      const KvEntry* lo = file.find("sweep", "box_lo");
      throw ConfigError(lo ? lo->line : 0, ex.what());
    }
  }
  return spec;
}

}  // namespace biocircuit::io
