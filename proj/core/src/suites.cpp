#include "acslab/suites.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include "acslab/anti_invariant.hpp"
#include "acslab/calabi_yau.hpp"
#include "acslab/errors.hpp"
#include "acslab/families.hpp"
#include "acslab/hermitian.hpp"
#include "acslab/lie_model.hpp"
#include "acslab/torus_calculus.hpp"

namespace acslab {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

GridChart chart_of(int n) {
  GridChart c;
  c.resolution = n;
  return c;
}

using Fn = std::function<double(const Eigen::Vector4d&)>;

TorusFamily family(const GridChart& chart, const Fn& lf, const Fn& sf) {
  const ScalarField l = ScalarField::sample(chart, lf);
  const ScalarField s = ScalarField::sample(chart, sf);
  ScalarField f = l;
  f.values = (1.0 - l.values.array().square() - s.values.array().square()).sqrt();
  return torus_family(f, l, s);
}

// A random trigonometric polynomial of amplitude at most `amp`.
Fn random_wave(std::mt19937_64& rng, double amp) {
  std::uniform_int_distribution<int> k(-1, 1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::array<Eigen::Vector4d, 2> wave;
  std::array<double, 2> coef{};
  std::array<double, 2> phase{};
  for (int t = 0; t < 2; ++t) {
    do {
      for (int a = 0; a < 4; ++a) wave[t][a] = k(rng);
    } while (wave[t].isZero());
    coef[t] = 0.5 * amp * u(rng);
    phase[t] = std::numbers::pi * u(rng);
  }
  return [=](const Eigen::Vector4d& x) {
    return coef[0] * std::cos(kTwoPi * wave[0].dot(x) + phase[0]) + coef[1] * std::cos(kTwoPi * wave[1].dot(x) + phase[1]);
  };
}

FormField random_form(const GridChart& chart, std::mt19937_64& rng, int degree, int max_mode) {
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> k(-max_mode, max_mode);
  FormField out = FormField::zero(chart, degree);
  for (auto& comp : out.components) {
    for (int term = 0; term < 3; ++term) {
      Eigen::Vector4d wave;
      for (int a = 0; a < 4; ++a) wave[a] = k(rng);
      const double a = normal(rng);
      const double b = normal(rng);
      comp += ScalarField::sample(chart, [&](const Eigen::Vector4d& x) {
                const double t = kTwoPi * wave.dot(x);
                return a * std::cos(t) + b * std::sin(t);
              }).values;
    }
  }
  return out;
}

std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(3) << v;
  return s.str();
}

struct Instance {
  std::string label;
  std::function<TorusFamily(const GridChart&)> build;
};

std::vector<Instance> family_instances() {
  std::vector<Instance> out;
  out.push_back({"constant", [](const GridChart& c) {
                   return family(c, [](const Eigen::Vector4d&) { return 0.5; }, [](const Eigen::Vector4d&) { return 0.3; });
                 }});
  out.push_back({"l-wave", [](const GridChart& c) {
                   return family(c, [](const Eigen::Vector4d& x) { return 0.4 * std::cos(kTwoPi * x[0]); },
                                 [](const Eigen::Vector4d&) { return 0.0; });
                 }});
  out.push_back({"parallel-waves", [](const GridChart& c) {
                   return family(c, [](const Eigen::Vector4d& x) { return 0.3 * std::cos(kTwoPi * x[0]); },
                                 [](const Eigen::Vector4d& x) { return 0.4 * std::cos(kTwoPi * x[0]); });
                 }});
  out.push_back({"crossed-waves", [](const GridChart& c) {
                   return family(c, [](const Eigen::Vector4d& x) { return 0.4 * std::cos(kTwoPi * x[0]); },
                                 [](const Eigen::Vector4d& x) { return 0.3 * std::sin(kTwoPi * x[1]); });
                 }});
  out.push_back({"two-bumps", [](const GridChart& c) {
                   const auto t = two_bump_triple(c);
                   return torus_family(t[0], t[1], t[2]);
                 }});
  for (unsigned seed : {11u, 23u}) {
    out.push_back({"random-" + std::to_string(seed), [seed](const GridChart& c) {
                     std::mt19937_64 rng(seed);
                     const Fn l = random_wave(rng, 0.45);
                     const Fn s = random_wave(rng, 0.45);
                     return family(c, l, s);
                   }});
  }
  return out;
}

CriterionResult flat_torus() {
  CriterionResult r{1, "flat-torus", false, "", 0.0};
  const GridChart c = chart_of(8);
  const MetricField g = MetricField::flat(c);
  const ACSField j = ACSField::standard(c);
  const auto t0 = std::chrono::steady_clock::now();
  const SpectralReport rep = h_minus(g, j);
  const int hp = h_plus(g, j);
  const auto hb = harmonic_basis(g);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const int b2 = static_cast<int>(hb.basis.size());
  r.passed = rep.kernel_dim == 2 && hp == 4 && hb.b_plus == 3 && b2 == 6 && rep.gap_ratio >= 1e3 && secs < 30.0;
  r.detail = "h-=" + std::to_string(rep.kernel_dim) + " h+=" + std::to_string(hp) + " b+=" + std::to_string(hb.b_plus) +
             " b2=" + std::to_string(b2) + " gap=" + num(rep.gap_ratio) + " time=" + num(secs) + "s";
  return r;
}

CriterionResult torus_family_rule() {
  CriterionResult r{2, "torus-family", true, "", 0.0};
  const MetricField g8 = MetricField::flat(chart_of(8));
  const MetricField g12 = MetricField::flat(chart_of(12));
  for (const auto& inst : family_instances()) {
    const auto t0 = std::chrono::steady_clock::now();
    const TorusFamily a = inst.build(g8.chart);
    const TorusFamily b = inst.build(g12.chart);
    const int k8 = h_minus(g8, a.j).kernel_dim;
    const int k12 = h_minus(g12, b.j).kernel_dim;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool ok = a.predicted_h_minus == k8 && b.predicted_h_minus == k12 && k8 == k12 && secs < 120.0;
    r.passed = r.passed && ok;
    r.detail += inst.label + ":" + std::to_string(a.predicted_h_minus) + "/" + std::to_string(k8) + "/" +
                std::to_string(k12) + (ok ? "" : "!") + " ";
  }
  r.detail += "(predicted/N8/N12)";
  return r;
}

CriterionResult lee_structure_values() {
  CriterionResult r{3, "lee-structure", false, "", 0.0};
  const GridChart c = chart_of(8);
  const MetricField g = MetricField::flat(c);
  const ACSField jstd = ACSField::standard(c);
  const ACSField j = lee_structure(g, jstd, FormField::constant(c, flat_beta()));
  const int k = h_minus(g, j).kernel_dim;
  const int both = intersection_dim(j, jstd, g);
  r.passed = k == 1 && both == 1;
  r.detail = "h-=" + std::to_string(k) + " (expected 1) intersection=" + std::to_string(both) + " (expected 1)";
  return r;
}

CriterionResult hyperkahler_family() {
  CriterionResult r{4, "hyperkahler-family", true, "", 0.0};
  const GridChart c = chart_of(8);
  const MetricField g = MetricField::flat(c);
  for (const auto& [k1, k2] : std::vector<std::pair<double, double>>{{1.0, 0.0}, {0.3, -0.7}}) {
    const FamilyTriple t = h2_family(k1, k2);
    const TorusFamily fam = torus_family(ScalarField::constant(c, t.f), ScalarField::constant(c, t.l),
                                         ScalarField::constant(c, t.s));
    const int k = h_minus(g, fam.j).kernel_dim;
    r.passed = r.passed && k == 2;
    r.detail += "(" + num(k1) + "," + num(k2) + "):h-=" + std::to_string(k) + " ";
  }
  return r;
}

CriterionResult bump_path() {
  CriterionResult r{5, "path-scan", false, "", 0.0};
  const GridChart c = chart_of(8);
  const std::vector<double> samples{0.0, 0.25, 0.5, 0.75, 1.0};
  const ACSPath path = [&](double t) {
    const auto tr = two_bump_triple(c, 0.8 * t);
    return torus_family(tr[0], tr[1], tr[2]).j;
  };
  const auto scan = path_scan(samples, path, [&](const ACSField&) { return MetricField::flat(c); });
  bool ok = scan.front().kernel_dim == 2;
  for (const auto& s : scan) {
    if (s.t > 0.0 && s.kernel_dim != 0) ok = false;
    if (s.flagged) ok = false;
    r.detail += "t=" + num(s.t) + ":" + std::to_string(s.kernel_dim) + (s.flagged ? "*" : "") + " ";
  }
  r.passed = ok;
  return r;
}

CriterionResult lie_models() {
  CriterionResult r{6, "lie-models", false, "", 0.0};
  const Preset kod = preset("kodaira");
  const InvariantHpm hk = invariant_h_pm(kod.model, kod.j, kod.g);
  const TameVerdict tv = tame_verdict(hk.b_plus, hk.h_minus, false);
  const bool kod_ok = hk.h_minus == 2 && hk.b_plus == 2 && hk.h_minus_alt == 2 && tv.difference == 0 && !tv.met;

  const Preset ts = preset("three-step");
  const InvariantHpm h3 = invariant_h_pm(ts.model, ts.j, ts.g);
  const NijenhuisData nd = nijenhuis_invariant(ts.model, ts.j);
  Eigen::MatrixXd im(4, static_cast<Eigen::Index>(nd.image_basis.size()));
  for (std::size_t i = 0; i < nd.image_basis.size(); ++i) im.col(static_cast<Eigen::Index>(i)) = nd.image_basis[i];
  // span(e3, e4): the first two coordinates vanish and the rank is 2.
  const bool image_ok = nd.image_basis.size() == 2 && im.topRows(2).isZero(0.0) &&
                        Eigen::FullPivLU<Eigen::MatrixXd>(im.bottomRows(2)).rank() == 2;
  const Eigen::Vector4d theta = invariant_lee_form(ts.model, ts.j, ts.g);
  const bool lee_ok = theta == Eigen::Vector4d(0.0, 0.0, -1.0, 0.0);
  const WellBalancedResiduals wb = invariant_well_balanced(ts.model, ts.j, ts.g);
  const bool wb_ok = wb.res_iii == 0.0 && wb.res_iv == 0.0 && wb.res_v == 0.0;
  const bool sig_ok = signature_constraint(0, 0);
  const bool three_ok = h3.b_plus == 1 && h3.h_minus == 1 && h3.h_minus_alt == 1 && image_ok && lee_ok && wb_ok && sig_ok;

  r.passed = kod_ok && three_ok;
  std::ostringstream d;
  d << "kodaira h-=" << hk.h_minus << " b+=" << hk.b_plus << " tame-diff=" << tv.difference << "; three-step b+="
    << h3.b_plus << " h-=" << h3.h_minus << " Im(N)=" << (image_ok ? "<e3,e4>" : "other") << " theta=("
    << theta.transpose() << ") wb=" << wb.res_iii << "," << wb.res_iv << "," << wb.res_v;
  r.detail = d.str();
  return r;
}

CriterionResult intersection_bound() {
  CriterionResult r{7, "intersection-bound", true, "", 0.0};
  const GridChart c = chart_of(8);
  const MetricField g = MetricField::flat(c);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  auto constant_structure = [&]() {
    Eigen::Vector3d v(std::abs(normal(rng)) + 0.2, normal(rng), normal(rng));
    v.normalize();
    return torus_family(ScalarField::constant(c, v[0]), ScalarField::constant(c, v[1]), ScalarField::constant(c, v[2])).j;
  };
  auto wave_structure = [&]() {
    const Fn l = random_wave(rng, 0.45);
    const Fn s = random_wave(rng, 0.45);
    return family(c, l, s).j;
  };
  for (int i = 0; i < 10; ++i) {
    const ACSField j1 = constant_structure();
    const ACSField j2 = i < 5 ? constant_structure() : wave_structure();
    const int d = intersection_dim(j1, j2, g);
    r.passed = r.passed && d <= 1;
    r.detail += std::to_string(d) + " ";
  }
  r.detail += "(all must be <= 1)";
  return r;
}

CriterionResult operator_properties() {
  CriterionResult r{8, "operators", true, "", 0.0};
  const GridChart c = chart_of(8);
  const MetricField g = MetricField::flat(c);
  const ACSField j = family(c, [](const Eigen::Vector4d& x) { return 0.4 * std::cos(kTwoPi * x[0]); },
                            [](const Eigen::Vector4d& x) { return 0.3 * std::sin(kTwoPi * (x[1] + x[2])); })
                         .j;
  std::mt19937_64 rng(8);
  double sa = 0.0;
  double agree = 0.0;
  for (int i = 0; i < 20; ++i) {
    const FormField a = anti_invariant_part(random_form(c, rng, 2, 2), j);
    const FormField b = anti_invariant_part(random_form(c, rng, 2, 2), j);
    const FormField pa = lejmi_P(a, g, j);
    const FormField pb = lejmi_P(b, g, j);
    sa = std::max(sa, std::abs(l2_inner(pa, b, g) - l2_inner(a, pb, g)) / (l2_norm(a, g) * l2_norm(b, g)));
    agree = std::max(agree, (pa - lejmi_P_laplacian(a, g, j)).max_abs() / std::max(1.0, pa.max_abs()));
  }
  const bool sa_ok = sa < 1e-9;
  const bool agree_ok = agree < 1e-8;

  double kernel_defect = 0.0;
  const MetricField g8 = MetricField::flat(c);
  std::vector<std::pair<std::string, ACSField>> cases;
  cases.emplace_back("flat", ACSField::standard(c));
  for (const auto& inst : family_instances()) cases.emplace_back(inst.label, inst.build(c).j);
  cases.emplace_back("lee", lee_structure(g8, ACSField::standard(c), FormField::constant(c, flat_beta())));
  bool oracle_ok = true;
  std::string oracle;
  for (const auto& [label, jj] : cases) {
    const SpectralReport rep = h_minus(g8, jj);
    const int rank = h_minus_rank_test(g8, jj);
    if (rank != rep.kernel_dim) {
      oracle_ok = false;
      oracle += label + ":" + std::to_string(rep.kernel_dim) + "!=" + std::to_string(rank) + " ";
    }
    const FormField omega = fundamental_form(g8, jj, 1e-9);
    for (const auto& psi : rep.kernel) {
      kernel_defect = std::max(kernel_defect, ext_d(psi).max_abs());
      kernel_defect = std::max(kernel_defect, (psi - hodge_star(psi, g8)).max_abs());
      kernel_defect = std::max(kernel_defect, pointwise_inner(psi, omega, g8).values.cwiseAbs().maxCoeff());
    }
  }
  const bool kernel_ok = kernel_defect < 1e-7;
  r.passed = sa_ok && agree_ok && kernel_ok && oracle_ok;
  r.detail = "self-adjoint=" + num(sa) + " formulas=" + num(agree) + " kernel=" + num(kernel_defect) +
             " oracle=" + (oracle_ok ? std::string("agree") : oracle);
  return r;
}

CriterionResult weitzenbock() {
  CriterionResult r{9, "weitzenbock", false, "", 0.0};
  const GridChart c = chart_of(16);
  const MetricField flat = MetricField::flat(c);
  const ScalarField u = ScalarField::sample(
      c, [](const Eigen::Vector4d& x) { return 0.1 * std::sin(kTwoPi * x[0]) * std::cos(kTwoPi * x[1]); });
  const MetricField conf = flat.conformal(u);
  const CurvatureData cf = curvature(levi_civita(flat), flat);
  const CurvatureData cc = curvature(levi_civita(conf), conf);
  std::mt19937_64 rng(9);
  double worst_flat = 0.0;
  double worst_conf = 0.0;
  for (int i = 0; i < 10; ++i) {
    const FormField psi = random_form(c, rng, 2, 2);
    worst_flat = std::max(worst_flat, weitzenbock_residual(psi, flat, cf).relative_residual);
    worst_conf = std::max(worst_conf, weitzenbock_residual(psi, conf, cc).relative_residual);
  }
  r.passed = worst_flat < 1e-8 && worst_conf < 1e-6;
  r.detail = "flat=" + num(worst_flat) + " conformal=" + num(worst_conf);
  return r;
}

CriterionResult type_d() {
  CriterionResult r{10, "type-d", false, "", 0.0};
  const ACSValue jstd = ACSValue::standard();
  const TwoFormValue omega = fundamental_form(MetricValue::euclidean(), jstd);
  std::ostringstream d;

  const GridChart c8 = chart_of(8);
  const TypeDProblem fixed = make_type_d_problem(ACSField::standard(c8), omega, jstd, ScalarField::constant(c8, 0.0));
  const CYSolution s0 = solve_type_D(fixed);
  const bool fixed_ok = s0.iterations == 0 && s0.b.max_abs() == 0.0 && s0.s == std::vector<double>{0.0, 0.0} && s0.scale == 0.0 &&
                        (s0.omega - fixed.omega_ref).max_abs() == 0.0;
  d << "fixed-point iterations=" << s0.iterations << "; ";

  const GridChart c = chart_of(12);
  bool f_ok = false;
  try {
    const ScalarField F =
        ScalarField::sample(c, [](const Eigen::Vector4d& x) { return 0.1 * std::cos(kTwoPi * x[0]); });
    const CYSolution s1 = solve_type_D(make_type_d_problem(ACSField::standard(c), omega, jstd, F));
    f_ok = s1.iterations <= 10 && s1.residual_history.back() < 1e-8 && s1.volume_defect < 1e-6;
    d << "F solve iterations=" << s1.iterations << " residual=" << num(s1.residual_history.back())
      << " volume=" << num(s1.volume_defect) << "; ";
  } catch (const Error& e) {
    d << "F solve failed: " << e.what() << "; ";
  }

  auto perturbed_on = [](const GridChart& chart, double t) {
    return family(chart, [t](const Eigen::Vector4d& x) { return 0.1 * t * std::cos(kTwoPi * x[0]); },
                  [t](const Eigen::Vector4d& x) { return 0.1 * t * std::sin(kTwoPi * x[1]); })
        .j;
  };
  auto perturbed = [&](double t) { return perturbed_on(c, t); };
  bool j_ok = false;
  try {
    const CYSolution s2 = solve_type_D(make_type_d_problem(perturbed(1.0), omega, jstd, ScalarField::constant(c, 0.0)));
    const double taming_defect = std::max(0.0, -s2.taming_margin);
    j_ok = s2.compatibility_defect < 1e-8 && taming_defect < 1e-8 && s2.taming_margin > 0.0 && s2.closedness_defect < 1e-8;
    d << "perturbed J compatibility=" << num(s2.compatibility_defect) << " taming margin=" << num(s2.taming_margin)
      << "; ";
  } catch (const Error& e) {
    d << "perturbed J failed: " << e.what() << "; ";
  }

  const GridChart c16 = chart_of(16);
  auto perturbed16 = [&](double t) { return perturbed_on(c16, t); };
  const SemicontinuityReport rep = semicontinuity_experiment({0.5, 1.0}, perturbed16, jstd, kahler_rays(jstd));
  bool semi_ok = rep.base_h_plus == 4 && rep.base_h_minus == 2;
  d << "h+ " << rep.base_h_plus;
  for (const auto& s : rep.samples) {
    semi_ok = semi_ok && s.h_plus == 6 && s.h_minus == 0 && s.all_solved && s.inequalities_hold &&
              s.class_rank == static_cast<int>(s.rays.size());
    d << " -> " << s.h_plus;
  }
  d << ", h- " << rep.base_h_minus;
  for (const auto& s : rep.samples) d << " -> " << s.h_minus;
  int solved = 0;
  int total = 0;
  for (const auto& s : rep.samples) {
    for (const auto& ray : s.rays) {
      ++total;
      solved += ray.solved ? 1 : 0;
    }
  }
  d << ", rays solved " << solved << "/" << total;
  r.passed = fixed_ok && f_ok && j_ok && semi_ok;
  r.detail = d.str();
  return r;
}

struct Entry {
  const char* name;
  CriterionResult (*fn)();
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> e{
      {"flat-torus", flat_torus},       {"torus-family", torus_family_rule}, {"lee-structure", lee_structure_values},
      {"hyperkahler-family", hyperkahler_family}, {"path-scan", bump_path}, {"lie-models", lie_models},
      {"intersection-bound", intersection_bound}, {"operators", operator_properties}, {"weitzenbock", weitzenbock},
      {"type-d", type_d},
  };
  return e;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& e : entries()) out.emplace_back(e.name);
    return out;
  }();
  return names;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream s;
  s << (r.passed ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.name << "  (" << std::fixed << std::setprecision(1)
    << r.seconds << "s)  " << r.detail;
  return s.str();
}

std::vector<CriterionResult> run_suite(const std::string& name, std::ostream* log) {
  std::vector<CriterionResult> out;
  bool known = name == "all";
  for (const auto& e : entries()) known = known || name == e.name;
  if (!known) throw Error(ErrorKind::ConfigError, "unknown suite \"" + name + "\"");
  for (const auto& e : entries()) {
    if (name != "all" && name != e.name) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = e.fn();
    } catch (const std::exception& ex) {
      r.name = e.name;
      r.passed = false;
      r.detail = std::string("error: ") + ex.what();
    }
    r.id = static_cast<int>(&e - entries().data()) + 1;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (log) *log << format_result(r) << std::endl;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace acslab
