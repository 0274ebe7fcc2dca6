#include "biocircuit/models/reference.hpp"

#include <stdexcept>

#include "biocircuit/io/kv.hpp"

namespace biocircuit::models {

namespace detail {
extern const char* const kQicReferenceText;
extern const char* const kFfwdReferenceText;
extern const char* const kGrnReferenceText;
extern const char* const kReproReferenceText;
}  // namespace detail

namespace {

const io::KvFile& parsed(const std::string& text) {
  static std::vector<std::pair<const std::string*, io::KvFile>> cache;
  for (auto& [key, file] : cache)
    if (key == &text) return file;
  cache.emplace_back(&text, io::KvFile::parse(text));
  return cache.back().second;
}

double num(const io::KvFile& f, const char* section, const char* key) {
  const io::KvEntry* e = f.find(section, key);
  if (!e)
    throw std::runtime_error(std::string("reference constants missing [") + section +
                             "] " + key);
  return io::parse_number(*e);
}

}  // namespace

const std::string& qic_reference_text() {
  static const std::string text = detail::kQicReferenceText;
  return text;
}
const std::string& ffwd_reference_text() {
  static const std::string text = detail::kFfwdReferenceText;
  return text;
}
const std::string& grn_reference_text() {
  static const std::string text = detail::kGrnReferenceText;
  return text;
}
const std::string& repro_reference_text() {
  static const std::string text = detail::kReproReferenceText;
  return text;
}

QicParams reference_qic() {
  const io::KvFile& f = parsed(qic_reference_text());
  QicParams q;
  q.k1 = num(f, "qic", "k1");
  q.k2 = num(f, "qic", "k2");
  q.K1 = num(f, "qic", "K1");
  q.K2 = num(f, "qic", "K2");
  q.gamma_u = num(f, "qic", "gamma_u");
  q.v = num(f, "qic", "v");
  q.u_tot = num(f, "qic", "u_tot");
  q.K_act = num(f, "qic", "K_act");
  q.a_act = num(f, "qic", "a_act");
  q.n_act = num(f, "qic", "n_act");
  q.w_open = num(f, "qic", "w_open");
  q.validate();
  return q;
}

PlantParams reference_plant() {
  const io::KvFile& f = parsed(qic_reference_text());
  PlantParams p;
  p.alpha = num(f, "plant", "alpha");
  p.beta = num(f, "plant", "beta");
  p.R_TX = num(f, "plant", "R_TX");
  p.R_TL = num(f, "plant", "R_TL");
  p.delta = num(f, "plant", "delta");
  p.gamma = num(f, "plant", "gamma");
  p.validate();
  return p;
}

FfwdParams reference_ffwd() {
  const io::KvFile& f = parsed(ffwd_reference_text());
  FfwdParams w;
  const io::KvEntry* variant = f.find("ffwd", "variant");
  if (!variant) throw std::runtime_error("reference constants missing [ffwd] variant");
  if (variant->value == "ern")
    w.variant = FfwdVariant::ern;
  else if (variant->value == "microrna")
    w.variant = FfwdVariant::microrna;
  else
    throw std::runtime_error("unknown feedforward variant '" + variant->value + "'");
  w.alpha_bar = num(f, "ffwd", "alpha_bar");
  w.delta_bar = num(f, "ffwd", "delta_bar");
  w.beta_bar = num(f, "ffwd", "beta_bar");
  w.gamma_bar = num(f, "ffwd", "gamma_bar");
  w.g = num(f, "ffwd", "g");
  w.alpha = num(f, "ffwd", "alpha");
  w.beta = num(f, "ffwd", "beta");
  w.delta = num(f, "ffwd", "delta");
  w.gamma = num(f, "ffwd", "gamma");
  w.validate();
  return w;
}

GrnParams reference_grn() {
  const io::KvFile& f = parsed(grn_reference_text());
  GrnParams g;
  g.b_O = num(f, "grn", "b_O");
  g.a_self = num(f, "grn", "a_self");
  g.K_self = num(f, "grn", "K_self");
  g.a_comp_O = num(f, "grn", "a_comp_O");
  g.K_comp_O = num(f, "grn", "K_comp_O");
  g.b_N = num(f, "grn", "b_N");
  g.a_comp_N = num(f, "grn", "a_comp_N");
  g.K_comp_N = num(f, "grn", "K_comp_N");
  g.K_rep = num(f, "grn", "K_rep");
  g.n_hill = num(f, "grn", "n_hill");
  g.gamma = num(f, "grn", "gamma");
  g.x_star = num(f, "grn", "x_star");
  g.validate();
  return g;
}

GrnReferenceMeta grn_reference_meta() {
  const io::KvFile& f = parsed(grn_reference_text());
  GrnReferenceMeta meta;
  const io::KvEntry* lo = f.find("search", "box_lo");
  const io::KvEntry* hi = f.find("search", "box_hi");
  const io::KvEntry* somatic = f.find("search", "somatic");
  if (!lo || !hi || !somatic)
    throw std::runtime_error("reference constants missing [search] entries");
  meta.box.lo = io::parse_number_list(*lo);
  meta.box.hi = io::parse_number_list(*hi);
  const std::vector<double> s = io::parse_number_list(*somatic);
  if (meta.box.lo.size() != 2 || meta.box.hi.size() != 2 || s.size() != 2)
    throw std::runtime_error("network search entries must have two coordinates");
  meta.somatic = {s[0], s[1]};
  meta.n_starts = static_cast<int>(num(f, "search", "n_starts"));
  meta.u_large = num(f, "search", "u_large");
  meta.u_sweep_max = num(f, "search", "u_sweep_max");
  meta.sweep_points = static_cast<int>(num(f, "search", "sweep_points"));
  return meta;
}

ReproParams reference_repro() {
  const io::KvFile& f = parsed(repro_reference_text());
  ReproParams r;
  r.G = num(f, "repro", "G");
  r.alpha = num(f, "repro", "alpha");
  r.beta = num(f, "repro", "beta");
  r.c = num(f, "repro", "c");
  r.delta = num(f, "repro", "delta");
  r.delta_bar = num(f, "repro", "delta_bar");
  r.kappa = num(f, "repro", "kappa");
  r.gamma = num(f, "repro", "gamma");
  r.d = num(f, "repro", "d");
  r.validate();
  return r;
}

ReproReferenceMeta repro_reference_meta() {
  const io::KvFile& f = parsed(repro_reference_text());
  ReproReferenceMeta meta;
  meta.t_off = num(f, "scenario", "t_off");
  meta.t_settle = num(f, "scenario", "t_settle");
  meta.u_overexpress = num(f, "scenario", "u_overexpress");
  return meta;
}

}  // namespace biocircuit::models
