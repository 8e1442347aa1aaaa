#include "acslab/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "acslab/anti_invariant.hpp"
#include "acslab/calabi_yau.hpp"
#include "acslab/errors.hpp"
#include "acslab/expr.hpp"
#include "acslab/families.hpp"
#include "acslab/field_io.hpp"
#include "acslab/hermitian.hpp"
#include "acslab/lie_model.hpp"
#include "acslab/suites.hpp"

namespace acslab {
namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void config_error(const std::string& key, const std::string& what) {
  throw Error(ErrorKind::ConfigError, "\"" + key + "\": " + what);
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void check_object(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) config_error(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) config_error(join(path, key), "unknown key");
  }
}

const std::map<std::string, std::set<std::string>>& kind_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"hminus", {"experiment", "seed", "grid", "metric", "structure", "hminus", "output"}},
      {"path-scan", {"experiment", "seed", "grid", "metric", "path", "hminus", "output"}},
      {"family", {"experiment", "seed", "grid", "instances", "hminus", "output"}},
      {"lie", {"experiment", "seed", "preset", "output"}},
      {"hermitian", {"experiment", "seed", "grid", "metric", "structure", "gauduchon", "output"}},
      {"cy-solve", {"experiment", "seed", "grid", "structure", "F", "solver", "output"}},
      {"intersection", {"experiment", "seed", "grid", "metric", "structure", "second", "tolerance", "output"}},
  };
  return keys;
}

double number(const json& obj, const std::string& key, const std::string& path, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number() || !std::isfinite(v.get<double>())) config_error(join(path, key), "expected a finite number");
  return v.get<double>();
}

int integer(const json& obj, const std::string& key, const std::string& path, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) config_error(join(path, key), "expected an integer");
  return v.get<int>();
}

std::string text(const json& obj, const std::string& key, const std::string& path, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) config_error(join(path, key), "expected a string");
  return v.get<std::string>();
}

const json& required(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) config_error(join(path, key), "missing");
  return obj.at(key);
}

/// Parses and samples an expression, rejecting non-finite values.
ScalarField expression(const json& obj, const std::string& key, const std::string& path, const GridChart& chart) {
  const std::string where = join(path, key);
  const json& v = required(obj, key, path);
  std::string src;
  if (v.is_number()) {
    std::ostringstream s;
    s.precision(17);
    s << v.get<double>();
    src = s.str();
  } else if (v.is_string()) {
    src = v.get<std::string>();
  } else {
    config_error(where, "expected an expression string");
  }
  ScalarField f;
  try {
    f = Expression::parse(src).sample(chart);
  } catch (const Error& e) {
    config_error(where, e.what());
  }
  if (!f.values.allFinite()) config_error(where, "expression is not finite on the grid");
  return f;
}

std::string expression_text(const json& obj, const std::string& key) {
  if (!obj.contains(key)) return "";
  return obj.at(key).is_string() ? obj.at(key).get<std::string>() : obj.at(key).dump();
}

Sign sign_of(const json& obj, const std::string& path) {
  const std::string s = text(obj, "sign", path, "+");
  if (s == "+") return Sign::Plus;
  if (s == "-") return Sign::Minus;
  config_error(join(path, "sign"), "expected \"+\" or \"-\"");
}

GridChart grid_of(const json& cfg) {
  GridChart c;
  if (!cfg.contains("grid")) return c;
  const json& g = cfg.at("grid");
  check_object(g, "grid", {"resolution", "periods"});
  c.resolution = integer(g, "resolution", "grid", c.resolution);
  if (g.contains("periods")) {
    const json& p = g.at("periods");
    if (!p.is_array() || p.size() != 4) config_error("grid.periods", "expected four numbers");
    for (int a = 0; a < 4; ++a) {
      if (!p[a].is_number()) config_error("grid.periods", "expected four numbers");
      c.periods[a] = p[a].get<double>();
    }
  }
  try {
    c.validate();
  } catch (const Error& e) {
    config_error("grid", e.what());
  }
  return c;
}

MetricField metric_of(const json& cfg, const GridChart& chart) {
  const MetricField flat = MetricField::flat(chart);
  if (!cfg.contains("metric")) return flat;
  const json& m = cfg.at("metric");
  check_object(m, "metric", {"u"});
  if (!m.contains("u")) return flat;
  return flat.conformal(expression(m, "u", "metric", chart));
}

TwoFormValue alpha_of(const json& obj, const std::string& path) {
  if (!obj.contains("alpha")) return flat_beta();
  const json& a = obj.at("alpha");
  if (!a.is_array() || a.size() != 6) config_error(join(path, "alpha"), "expected six coefficients (12,13,14,23,24,34)");
  forms::Coeffs v(6);
  for (int k = 0; k < 6; ++k) {
    if (!a[k].is_number()) config_error(join(path, "alpha"), "expected six coefficients (12,13,14,23,24,34)");
    v[k] = a[k].get<double>();
  }
  return TwoFormValue::from_coeffs(v);
}

TorusFamily family_from(const json& obj, const std::string& path, const GridChart& chart, double scale = 1.0) {
  ScalarField l = expression(obj, "l", path, chart);
  ScalarField s = expression(obj, "s", path, chart);
  l.values *= scale;
  s.values *= scale;
  ScalarField f = l;
  if (obj.contains("f")) {
    f = expression(obj, "f", path, chart);
  } else {
    const Eigen::ArrayXd rest = 1.0 - l.values.array().square() - s.values.array().square();
    if ((rest <= 0.0).any()) config_error(path, "l^2 + s^2 must stay below 1");
    f.values = rest.sqrt().matrix();
  }
  return torus_family(f, l, s);
}

/// Structures are built over J_std and the configured metric.
ACSField structure_of(const json& obj, const std::string& path, const MetricField& g) {
  const GridChart& chart = g.chart;
  if (!obj.is_object()) config_error(path, "expected an object");
  const std::string kind = text(obj, "kind", path, "standard");
  const ACSField jstd = ACSField::standard(chart);
  if (kind == "standard") {
    check_object(obj, path, {"kind"});
    return jstd;
  }
  if (kind == "family") {
    check_object(obj, path, {"kind", "f", "l", "s"});
    return family_from(obj, path, chart).j;
  }
  if (kind == "h2-family") {
    check_object(obj, path, {"kind", "k1", "k2", "sign"});
    const FamilyTriple t = h2_family(number(obj, "k1", path, 1.0), number(obj, "k2", path, 0.0), sign_of(obj, path));
    return torus_family(ScalarField::constant(chart, t.f), ScalarField::constant(chart, t.l),
                        ScalarField::constant(chart, t.s))
        .j;
  }
  if (kind == "two-bumps") {
    check_object(obj, path, {"kind", "amplitude", "radius"});
    const auto t = two_bump_triple(chart, number(obj, "amplitude", path, 0.8), number(obj, "radius", path, 0.3));
    return torus_family(t[0], t[1], t[2]).j;
  }
  if (kind == "lee" || kind == "conformal") {
    check_object(obj, path, {"kind", "alpha", "sign"});
    const FormField alpha = FormField::constant(chart, alpha_of(obj, path));
    return kind == "lee" ? lee_structure(g, jstd, alpha, sign_of(obj, path))
                         : conformal_structure(g, jstd, alpha, sign_of(obj, path));
  }
  if (kind == "from-alpha" || kind == "twisted") {
    check_object(obj, path, {"kind", "alpha", "r", "sign"});
    const FormField alpha = FormField::constant(chart, alpha_of(obj, path));
    const ScalarField r = expression(obj, "r", path, chart);
    return kind == "from-alpha" ? build_from_alpha(g, jstd, alpha, r, sign_of(obj, path))
                                : twisted_from_alpha(g, jstd, alpha, r, sign_of(obj, path));
  }
  config_error(join(path, "kind"), "unknown structure kind \"" + kind + "\"");
}

/// Checks structure keys and expressions without building the structure.
void check_structure(const json& obj, const std::string& path, const GridChart& chart) {
  if (!obj.is_object()) config_error(path, "expected an object");
  const std::string kind = text(obj, "kind", path, "standard");
  if (kind == "standard") {
    check_object(obj, path, {"kind"});
  } else if (kind == "family") {
    check_object(obj, path, {"kind", "f", "l", "s"});
    expression(obj, "l", path, chart);
    expression(obj, "s", path, chart);
    if (obj.contains("f")) expression(obj, "f", path, chart);
  } else if (kind == "h2-family") {
    check_object(obj, path, {"kind", "k1", "k2", "sign"});
    number(obj, "k1", path, 1.0);
    number(obj, "k2", path, 0.0);
    sign_of(obj, path);
  } else if (kind == "two-bumps") {
    check_object(obj, path, {"kind", "amplitude", "radius"});
    number(obj, "amplitude", path, 0.8);
    number(obj, "radius", path, 0.3);
  } else if (kind == "lee" || kind == "conformal") {
    check_object(obj, path, {"kind", "alpha", "sign"});
    alpha_of(obj, path);
    sign_of(obj, path);
  } else if (kind == "from-alpha" || kind == "twisted") {
    check_object(obj, path, {"kind", "alpha", "r", "sign"});
    alpha_of(obj, path);
    expression(obj, "r", path, chart);
    sign_of(obj, path);
  } else {
    config_error(join(path, "kind"), "unknown structure kind \"" + kind + "\"");
  }
}

HMinusOptions hminus_options(const json& cfg, unsigned seed) {
  HMinusOptions o;
  o.seed = seed;
  if (!cfg.contains("hminus")) return o;
  const json& h = cfg.at("hminus");
  check_object(h, "hminus",
               {"block", "wanted", "penalty", "residual_tolerance", "max_iterations", "relative_threshold",
                "min_gap_ratio", "throw_on_gap"});
  o.block = integer(h, "block", "hminus", o.block);
  o.wanted = integer(h, "wanted", "hminus", o.wanted);
  o.penalty = number(h, "penalty", "hminus", o.penalty);
  o.residual_tolerance = number(h, "residual_tolerance", "hminus", o.residual_tolerance);
  o.max_iterations = integer(h, "max_iterations", "hminus", o.max_iterations);
  o.relative_threshold = number(h, "relative_threshold", "hminus", o.relative_threshold);
  o.min_gap_ratio = number(h, "min_gap_ratio", "hminus", o.min_gap_ratio);
  if (h.contains("throw_on_gap")) {
    if (!h.at("throw_on_gap").is_boolean()) config_error("hminus.throw_on_gap", "expected a boolean");
    o.throw_on_gap = h.at("throw_on_gap").get<bool>();
  }
  if (o.block < 1 || o.wanted < 1 || o.wanted > o.block) config_error("hminus.wanted", "need 1 <= wanted <= block");
  if (o.max_iterations < 1) config_error("hminus.max_iterations", "must be positive");
  return o;
}

CYOptions cy_options(const json& cfg) {
  CYOptions o;
  if (!cfg.contains("solver")) return o;
  const json& s = cfg.at("solver");
  check_object(s, "solver", {"tolerance", "max_newton", "max_krylov", "krylov_tolerance", "accept_tolerance"});
  o.tolerance = number(s, "tolerance", "solver", o.tolerance);
  o.max_newton = integer(s, "max_newton", "solver", o.max_newton);
  o.max_krylov = integer(s, "max_krylov", "solver", o.max_krylov);
  o.krylov_tolerance = number(s, "krylov_tolerance", "solver", o.krylov_tolerance);
  o.accept_tolerance = number(s, "accept_tolerance", "solver", o.accept_tolerance);
  return o;
}

GauduchonOptions gauduchon_options(const json& cfg) {
  GauduchonOptions o;
  if (!cfg.contains("gauduchon")) return o;
  const json& s = cfg.at("gauduchon");
  check_object(s, "gauduchon", {"tolerance", "max_newton", "max_krylov"});
  o.tolerance = number(s, "tolerance", "gauduchon", o.tolerance);
  o.max_newton = integer(s, "max_newton", "gauduchon", o.max_newton);
  o.max_krylov = integer(s, "max_krylov", "gauduchon", o.max_krylov);
  return o;
}

std::vector<double> samples_of(const json& path) {
  std::vector<double> out{0.0, 0.25, 0.5, 0.75, 1.0};
  if (!path.contains("samples")) return out;
  const json& s = path.at("samples");
  if (!s.is_array() || s.empty()) config_error("path.samples", "expected a non-empty array of numbers");
  out.clear();
  for (const auto& v : s) {
    if (!v.is_number()) config_error("path.samples", "expected a non-empty array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

void validate(const json& cfg, const GridChart& chart) {
  if (!cfg.is_object()) config_error("", "top level must be an object");
  const std::string kind = text(cfg, "experiment", "", "");
  if (kind.empty()) config_error("experiment", "missing");
  const auto it = kind_keys().find(kind);
  if (it == kind_keys().end()) config_error("experiment", "unknown experiment kind \"" + kind + "\"");
  check_object(cfg, "", it->second);
  if (cfg.contains("seed") && !cfg.at("seed").is_number_unsigned()) config_error("seed", "expected a non-negative integer");
  if (cfg.contains("output")) {
    check_object(cfg.at("output"), "output", {"dir", "name"});
    text(cfg.at("output"), "dir", "output", "");
    text(cfg.at("output"), "name", "output", "");
  }
  if (cfg.contains("metric")) metric_of(cfg, chart);
  hminus_options(cfg, 0);
  cy_options(cfg);
  gauduchon_options(cfg);
  if (kind == "hminus" || kind == "hermitian" || kind == "intersection" || kind == "cy-solve") {
    check_structure(required(cfg, "structure", ""), "structure", chart);
  }
  if (kind == "intersection") {
    check_structure(required(cfg, "second", ""), "second", chart);
    number(cfg, "tolerance", "", 1e-8);
  }
  if (kind == "cy-solve") {
    if (cfg.contains("F")) expression(cfg, "F", "", chart);
  }
  if (kind == "lie") {
    const std::string p = text(cfg, "preset", "", "");
    if (p.empty()) config_error("preset", "missing");
    try {
      preset(p);
    } catch (const Error& e) {
      config_error("preset", e.what());
    }
  }
  if (kind == "path-scan") {
    const json& p = required(cfg, "path", "");
    if (!p.is_object()) config_error("path", "expected an object");
    const std::string pk = text(p, "kind", "path", "");
    if (pk == "bumps") {
      check_object(p, "path", {"kind", "amplitude", "radius", "samples"});
      number(p, "amplitude", "path", 0.8);
      number(p, "radius", "path", 0.3);
    } else if (pk == "family") {
      check_object(p, "path", {"kind", "l", "s", "samples"});
      expression(p, "l", "path", chart);
      expression(p, "s", "path", chart);
    } else {
      config_error("path.kind", "expected \"bumps\" or \"family\"");
    }
    samples_of(p);
  }
  if (kind == "family") {
    const json& list = required(cfg, "instances", "");
    if (!list.is_array() || list.empty()) config_error("instances", "expected a non-empty array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string where = "instances[" + std::to_string(i) + "]";
      const json& inst = list[i];
      if (!inst.is_object()) config_error(where, "expected an object");
      if (inst.contains("k1") || inst.contains("k2")) {
        check_object(inst, where, {"k1", "k2", "sign"});
        number(inst, "k1", where, 1.0);
        number(inst, "k2", where, 0.0);
        sign_of(inst, where);
      } else {
        check_object(inst, where, {"f", "l", "s"});
        expression(inst, "l", where, chart);
        expression(inst, "s", where, chart);
        if (inst.contains("f")) expression(inst, "f", where, chart);
      }
    }
  }
}

/// Rounds to 12 significant digits so records are stable across platforms.
double fixed(double v) {
  if (!std::isfinite(v)) return v;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::stod(buf);
}

json fixed_array(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(fixed(x));
  return a;
}

json vec4(const Eigen::Vector4d& v) { return fixed_array({v[0], v[1], v[2], v[3]}); }

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string csv_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct Output {
  json record;
  std::string csv;
};

json spectral_json(const SpectralReport& r) {
  json out;
  out["kernel_dim"] = r.kernel_dim;
  out["gap_ratio"] = fixed(r.gap_ratio);
  out["tolerance"] = fixed(r.tolerance);
  out["iterations"] = r.iterations;
  out["eigenvalues"] = fixed_array(r.eigenvalues);
  return out;
}

Output run_hminus(const json& cfg, const ExperimentConfig& ec) {
  const MetricField g = metric_of(cfg, ec.grid);
  const ACSField j = structure_of(cfg.at("structure"), "structure", g);
  const HMinusOptions o = hminus_options(cfg, ec.seed);
  const SpectralReport r = h_minus(g, j, o);
  Output out;
  out.record = spectral_json(r);
  out.record["h_plus"] = h_plus(g, j, o);
  out.record["rank_test"] = h_minus_rank_test(g, j);
  return out;
}

Output run_path_scan(const json& cfg, const ExperimentConfig& ec) {
  const MetricField g = metric_of(cfg, ec.grid);
  const json& p = cfg.at("path");
  const std::vector<double> samples = samples_of(p);
  ACSPath path;
  if (p.at("kind") == "bumps") {
    const double amplitude = number(p, "amplitude", "path", 0.8);
    const double radius = number(p, "radius", "path", 0.3);
    path = [&, amplitude, radius](double t) {
      const auto tr = two_bump_triple(ec.grid, amplitude * t, radius);
      return torus_family(tr[0], tr[1], tr[2]).j;
    };
  } else {
    path = [&](double t) { return family_from(p, "path", ec.grid, t).j; };
  }
  const auto scan = path_scan(samples, path, [&](const ACSField&) { return g; }, hminus_options(cfg, ec.seed));
  Output out;
  json rows = json::array();
  out.csv = "t,kernel_dim,gap_ratio\n";
  for (const auto& s : scan) {
    rows.push_back({{"t", fixed(s.t)}, {"kernel_dim", s.kernel_dim}, {"gap_ratio", fixed(s.gap_ratio)},
                    {"flagged", s.flagged}});
    out.csv += csv_number(s.t) + "," + std::to_string(s.kernel_dim) + "," + csv_number(s.gap_ratio) + "\n";
  }
  out.record["samples"] = rows;
  return out;
}

Output run_family(const json& cfg, const ExperimentConfig& ec) {
  const MetricField g = MetricField::flat(ec.grid);
  const HMinusOptions o = hminus_options(cfg, ec.seed);
  Output out;
  json rows = json::array();
  out.csv = "f,l,s,predicted,measured\n";
  const json& list = cfg.at("instances");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = "instances[" + std::to_string(i) + "]";
    const json& inst = list[i];
    TorusFamily fam;
    std::string f, l, s;
    if (inst.contains("k1") || inst.contains("k2")) {
      const FamilyTriple t = h2_family(number(inst, "k1", where, 1.0), number(inst, "k2", where, 0.0), sign_of(inst, where));
      fam = torus_family(ScalarField::constant(ec.grid, t.f), ScalarField::constant(ec.grid, t.l),
                         ScalarField::constant(ec.grid, t.s));
      f = csv_number(t.f);
      l = csv_number(t.l);
      s = csv_number(t.s);
    } else {
      fam = family_from(inst, where, ec.grid);
      f = inst.contains("f") ? expression_text(inst, "f") : "sqrt(1-l^2-s^2)";
      l = expression_text(inst, "l");
      s = expression_text(inst, "s");
    }
    const SpectralReport r = h_minus(g, fam.j, o);
    rows.push_back({{"f", f},
                    {"l", l},
                    {"s", s},
                    {"predicted", fam.predicted_h_minus},
                    {"measured", r.kernel_dim},
                    {"gap_ratio", fixed(r.gap_ratio)}});
    out.csv += csv_cell(f) + "," + csv_cell(l) + "," + csv_cell(s) + "," + std::to_string(fam.predicted_h_minus) + "," +
               std::to_string(r.kernel_dim) + "\n";
  }
  out.record["instances"] = rows;
  return out;
}

Output run_lie(const json& cfg) {
  const Preset p = preset(cfg.at("preset").get<std::string>());
  const InvariantHpm h = invariant_h_pm(p.model, p.j, p.g);
  const NijenhuisData n = nijenhuis_invariant(p.model, p.j);
  const WellBalancedResiduals wb = invariant_well_balanced(p.model, p.j, p.g);
  const TameVerdict tv = tame_verdict(h.b_plus, h.h_minus, false);
  Output out;
  out.record["model"] = p.model.to_text();
  json betti = json::array();
  for (int k = 0; k <= 4; ++k) betti.push_back(invariant_cohomology(p.model, k).betti);
  out.record["betti"] = betti;
  out.record["h_minus"] = h.h_minus;
  out.record["h_plus"] = h.h_plus;
  out.record["b_plus"] = h.b_plus;
  out.record["b_minus"] = h.b_minus;
  out.record["tame_difference"] = tv.difference;
  out.record["tame_label"] = tv.label();
  json image = json::array();
  for (const auto& v : n.image_basis) image.push_back(vec4(v));
  out.record["nijenhuis_image"] = image;
  out.record["lee_form"] = vec4(invariant_lee_form(p.model, p.j, p.g));
  out.record["well_balanced"] = fixed_array({wb.res_iii, wb.res_iv, wb.res_v});
  return out;
}

Output run_hermitian(const json& cfg, const ExperimentConfig& ec) {
  const MetricField g = metric_of(cfg, ec.grid);
  const ACSField j = structure_of(cfg.at("structure"), "structure", g);
  Output out;
  out.record["compatibility_residual"] = fixed(compatibility_residual(g, j));
  const FormField theta = lee_form(g, j);
  out.record["lee_residual"] = fixed(lee_residual(g, j, theta));
  out.record["lee_sup"] = fixed(theta.max_abs());
  out.record["gauduchon_residual"] = fixed(gauduchon_residual(g, j));
  const GauduchonResult gr = gauduchon_gauge(g, j, gauduchon_options(cfg));
  out.record["gauduchon"] = {{"iterations", gr.iterations},
                             {"residual", fixed(gr.residual)},
                             {"history", fixed_array(gr.history)}};
  const NijenhuisField n = nijenhuis_field(j);
  out.record["nijenhuis_sup"] = fixed(n.sup);
  out.record["nijenhuis_max_rank"] = n.max_rank;
  const CurvatureData curv = curvature(levi_civita(g), g);
  out.record["hermitian_weyl_residual"] = fixed(hermitian_weyl_residual(g, j, curv));
  try {
    const WellBalancedResiduals wb = well_balanced_residuals(g, j);
    out.record["well_balanced"] = fixed_array({wb.res_iii, wb.res_iv, wb.res_v});
  } catch (const Error& e) {
    out.record["well_balanced"] = e.what();
  }
  return out;
}

Output run_cy(const json& cfg, const ExperimentConfig& ec, const std::filesystem::path& dir) {
  const MetricField g = MetricField::flat(ec.grid);
  const ACSField j = structure_of(cfg.at("structure"), "structure", g);
  const ScalarField F = cfg.contains("F") ? expression(cfg, "F", "", ec.grid) : ScalarField::constant(ec.grid, 0.0);
  const ACSValue jstd = ACSValue::standard();
  const TypeDProblem problem = make_type_d_problem(j, fundamental_form(MetricValue::euclidean(), jstd), jstd, F);
  const CYSolution s = solve_type_D(problem, cy_options(cfg));
  const std::filesystem::path field = dir / (ec.name + ".omega.fld");
  write_field(field.string(), s.omega);
  Output out;
  out.record["iterations"] = s.iterations;
  out.record["residual_history"] = fixed_array(s.residual_history);
  out.record["s"] = fixed_array(s.s);
  out.record["scale"] = fixed(s.scale);
  out.record["compatibility_defect"] = fixed(s.compatibility_defect);
  out.record["volume_defect"] = fixed(s.volume_defect);
  out.record["closedness_defect"] = fixed(s.closedness_defect);
  out.record["taming_margin"] = fixed(s.taming_margin);
  out.record["gauge_defect"] = fixed(s.gauge_defect);
  out.record["omega_field"] = field.filename().string();
  return out;
}

Output run_intersection(const json& cfg, const ExperimentConfig& ec) {
  const MetricField g = metric_of(cfg, ec.grid);
  const ACSField j1 = structure_of(cfg.at("structure"), "structure", g);
  const ACSField j2 = structure_of(cfg.at("second"), "second", g);
  Output out;
  out.record["intersection_dim"] = intersection_dim(j1, j2, g, number(cfg, "tolerance", "", 1e-8));
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& body) {
  std::ofstream f(path);
  f << body;
  if (!f) throw Error(ErrorKind::IoError, "cannot write " + path.string());
}

}  // namespace

ExperimentConfig parse_config(const std::string& text_in, const RunOverrides& overrides) {
  json cfg;
  try {
    cfg = json::parse(text_in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ConfigError, std::string("malformed JSON: ") + e.what());
  }
  if (!cfg.is_object()) config_error("", "top level must be an object");
  if (overrides.seed) cfg["seed"] = *overrides.seed;
  if (overrides.resolution) cfg["grid"]["resolution"] = *overrides.resolution;
  if (overrides.out_dir) cfg["output"]["dir"] = *overrides.out_dir;
  const GridChart chart = grid_of(cfg);
  validate(cfg, chart);
  ExperimentConfig ec;
  ec.kind = cfg.at("experiment").get<std::string>();
  ec.seed = cfg.contains("seed") ? cfg.at("seed").get<unsigned>() : 0u;
  ec.grid = chart;
  if (cfg.contains("output")) {
    ec.out_dir = text(cfg.at("output"), "dir", "output", ec.out_dir);
    ec.name = text(cfg.at("output"), "name", "output", "");
  }
  if (ec.name.empty()) ec.name = ec.kind;
  ec.source = cfg.dump();
  return ec;
}

ExperimentConfig load_config(const std::string& path, const RunOverrides& overrides) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::IoError, "cannot read " + path);
  std::stringstream s;
  s << f.rdbuf();
  return parse_config(s.str(), overrides);
}

RunResult run(const ExperimentConfig& config) {
  const json cfg = json::parse(config.source);
  const std::filesystem::path dir(config.out_dir);
  std::filesystem::create_directories(dir);
  RunResult result;
  result.json_path = (dir / (config.name + ".json")).string();
  json record;
  record["experiment"] = config.kind;
  record["seed"] = config.seed;
  record["resolution"] = config.grid.resolution;
  record["config"] = cfg;
  try {
    Output out;
    if (config.kind == "hminus") out = run_hminus(cfg, config);
    else if (config.kind == "path-scan") out = run_path_scan(cfg, config);
    else if (config.kind == "family") out = run_family(cfg, config);
    else if (config.kind == "lie") out = run_lie(cfg);
    else if (config.kind == "hermitian") out = run_hermitian(cfg, config);
    else if (config.kind == "cy-solve") out = run_cy(cfg, config, dir);
    else out = run_intersection(cfg, config);
    record["status"] = "ok";
    record["result"] = out.record;
    if (!out.csv.empty()) {
      result.csv_path = (dir / (config.name + ".csv")).string();
      write_text(result.csv_path, out.csv);
    }
  } catch (const Error& e) {
    record["status"] = "error";
    record["error"] = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
    result.exit_code = 1;
  }
  result.record = record.dump(2) + "\n";
  write_text(result.json_path, result.record);
  return result;
}

int reproduce(const std::string& suite, std::ostream& out) {
  const auto results = run_suite(suite, &out);
  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  out << (failed == 0 ? "all " : "") << results.size() - failed << "/" << results.size() << " criteria passed"
      << std::endl;
  return failed == 0 ? 0 : 1;
}

void dump_field(const std::string& path, std::ostream& out) {
  const FormField f = read_field(path);
  out << field_header_json(f) << "\n";
  for (std::size_t k = 0; k < f.components.size(); ++k) {
    const auto& c = f.components[k];
    char line[128];
    std::snprintf(line, sizeof(line), "component %zu: min %.6e max %.6e mean %.6e\n", k, c.minCoeff(), c.maxCoeff(),
                  c.mean());
    out << line;
  }
}

}  // namespace acslab
