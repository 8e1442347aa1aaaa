#include "acslab/calabi_yau.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "acslab/eigensolver.hpp"
#include "acslab/errors.hpp"
#include "acslab/spectral.hpp"

namespace acslab {
namespace {

using cd = std::complex<double>;

// Oriented orthonormal self-dual frame of a constant metric, |σ|² = 2.
std::array<TwoFormValue, 3> sd_frame(const Eigen::Matrix4d& g) {
  const Eigen::Matrix4d lt = g.llt().matrixL().transpose();
  auto wedge_rows = [&](int a, int b) {
    const Eigen::Vector4d u = lt.row(a).transpose();
    const Eigen::Vector4d v = lt.row(b).transpose();
    return TwoFormValue::from_matrix(u * v.transpose() - v * u.transpose());
  };
  return {wedge_rows(0, 1) + wedge_rows(2, 3), wedge_rows(0, 2) - wedge_rows(1, 3),
          wedge_rows(0, 3) + wedge_rows(1, 2)};
}

TwoFormValue wedge_basis(int m, int j) {
  if (m == j) return {};
  return m < j ? basis_form(m, j) : basis_form(j, m) * -1.0;
}

FormField self_dual_part(const FormField& a, const MetricField& g) { return 0.5 * (a + hodge_star(a, g)); }

FormField filtered(const FormField& a) { return filter(a); }

ScalarField pfaffian_field(const FormField& w) {
  ScalarField out = ScalarField::constant(w.chart, 0.0);
  const auto& c = w.components;
  out.values = c[0].cwiseProduct(c[5]) - c[1].cwiseProduct(c[4]) + c[2].cwiseProduct(c[3]);
  return out;
}

ScalarField pfaffian_derivative(const FormField& w, const FormField& dw) {
  ScalarField out = ScalarField::constant(w.chart, 0.0);
  const auto& a = w.components;
  const auto& b = dw.components;
  out.values = a[0].cwiseProduct(b[5]) + b[0].cwiseProduct(a[5]) - a[1].cwiseProduct(b[4]) -
               b[1].cwiseProduct(a[4]) + a[2].cwiseProduct(b[3]) + b[2].cwiseProduct(a[3]);
  return out;
}

FormField candidate(const FormField& b, const std::vector<double>& s, double scale, const TypeDProblem& p) {
  FormField w = (1.0 + scale) * p.omega_ref;
  for (std::size_t i = 0; i < s.size(); ++i) w += s[i] * p.chi[i];
  w += ext_d(b);
  return w;
}

ScalarField volume_log(const FormField& w, const TypeDProblem& p) {
  const ScalarField pf = pfaffian_field(w);
  const ScalarField pf_ref = pfaffian_field(p.omega_ref);
  ScalarField out = pf;
  for (Eigen::Index x = 0; x < pf.values.size(); ++x) {
    const double ratio = pf.values[x] / pf_ref.values[x];
    if (!(ratio > 0.0)) {
      std::ostringstream msg;
      msg << "candidate square is " << ratio << " times the reference at grid point " << x;
      throw Error(ErrorKind::DegenerateCandidate, msg.str());
    }
    out.values[x] = std::log(ratio) - p.F.values[x];
  }
  return out;
}

FormField half_invariant_ref(const TypeDProblem& p) {
  return 0.5 * (p.omega_ref - pi_tensor(p.j, p.omega_ref));
}

struct LinearSolver {
  const MetricField& g;
  std::shared_ptr<const Spectral> sp;
  std::array<TwoFormValue, 3> sigma;
  Eigen::Matrix4d g_inv;
  std::array<Eigen::Matrix4d, 3> k;  // k[a](m,j) = ⟨e^m∧e^j, σ_a⟩/2

  explicit LinearSolver(const MetricField& metric) : g(metric), sp(Spectral::get(metric.chart)) {
    if (!metric.constant) throw Error(ErrorKind::UnsupportedMetric, "the linearized solver needs a constant metric");
    sigma = sd_frame(metric.g[0]);
    g_inv = metric.g_inv[0];
    for (int a = 0; a < 3; ++a) {
      for (int m = 0; m < 4; ++m) {
        for (int j = 0; j < 4; ++j) k[a](m, j) = 0.5 * inner(wedge_basis(m, j), sigma[a], metric.at(0));
      }
    }
  }

  // Coefficients c_a = ⟨α, σ_a⟩/2 as fields.
  std::array<Eigen::VectorXd, 3> coefficients(const FormField& alpha) const {
    std::array<Eigen::VectorXd, 3> out;
    const forms::CompoundMatrix c = forms::compound(g_inv, 2);
    for (int a = 0; a < 3; ++a) {
      const Eigen::Matrix<double, 6, 1> w = 0.5 * (c * sigma[a].coeffs());
      out[a] = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(alpha.chart.points()));
      for (int m = 0; m < 6; ++m) out[a] += w[m] * alpha.components[m];
    }
    return out;
  }

  FormField solve(const Eigen::VectorXd& rhs0, const std::array<Eigen::VectorXd, 3>& c) const {
    const auto r0 = sp->forward(rhs0);
    std::array<Spectral::Spectrum, 3> rc;
    for (int a = 0; a < 3; ++a) rc[a] = sp->forward(c[a]);
    std::array<Spectral::Spectrum, 4> out;
    for (auto& o : out) o.assign(sp->spectrum_size(), cd(0.0, 0.0));
    for (std::size_t s = 1; s < sp->spectrum_size(); ++s) {
      if (sp->touches_nyquist(s) || sp->laplacian_symbol(s) <= 0.0) continue;
      Eigen::Vector4cd xi;
      for (int m = 0; m < 4; ++m) xi[m] = sp->derivative_symbol(s, m);
      Eigen::Matrix4cd mat;
      for (int j = 0; j < 4; ++j) {
        cd v = 0.0;
        for (int i = 0; i < 4; ++i) v -= g_inv(i, j) * xi[i];
        mat(0, j) = v;
        for (int a = 0; a < 3; ++a) {
          cd w = 0.0;
          for (int m = 0; m < 4; ++m) w += xi[m] * k[a](m, j);
          mat(a + 1, j) = w;
        }
      }
      const Eigen::Vector4cd rhs(r0[s], rc[0][s], rc[1][s], rc[2][s]);
      const Eigen::Vector4cd sol = mat.partialPivLu().solve(rhs);
      for (int j = 0; j < 4; ++j) out[j][s] = sol[j];
    }
    FormField a = FormField::zero(g.chart, 1);
    for (int j = 0; j < 4; ++j) a.components[j] = sp->inverse(std::move(out[j]));
    return a;
  }
};

}  // namespace

FormField pi_tensor(const ACSField& j, const FormField& alpha) {
  FormField out = FormField::zero(alpha.chart, 2);
  for (std::size_t x = 0; x < alpha.chart.points(); ++x) {
    const Eigen::Matrix4d a = alpha.two_form_at(x).matrix();
    const Eigen::Matrix4d& jm = j.j[x];
    out.set_two_form(x, TwoFormValue::from_matrix(0.5 * (a - jm.transpose() * a * jm)));
  }
  return out;
}

TypeDProblem make_type_d_problem(const ACSField& j, const TwoFormValue& omega_ref, const ACSValue& reference_j,
                                 const ScalarField& F) {
  const GridChart& chart = j.chart;
  Eigen::Matrix4d g = omega_ref.matrix() * reference_j.j;
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, g.cwiseAbs().maxCoeff())) {
    throw Error(ErrorKind::IncompatiblePair, "reference form is not invariant under the reference structure");
  }
  g = 0.5 * (g + g.transpose());
  const MetricValue gv{g};
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(g);
  if (!(es.eigenvalues().minCoeff() > 0.0)) {
    throw Error(ErrorKind::IncompatiblePair, "reference form does not tame the reference structure");
  }
  TypeDProblem p;
  p.j = j;
  p.reference_j = ACSField::uniform(chart, reference_j);
  p.g_ref = MetricField::uniform(chart, gv);
  p.omega_ref = FormField::constant(chart, omega_ref);
  p.F = F;
  const double shift = std::log((F.values.array().exp()).mean());
  p.F.values.array() -= shift;
  const double volume = gv.sqrt_det() * chart.volume();
  for (const auto& phi : split_basis(gv, reference_j).minus_basis) {
    p.chi.push_back(FormField::constant(chart, phi * (1.0 / std::sqrt(norm2(phi, gv) * volume))));
  }
  return p;
}

FormField phi_residual(const FormField& b, const std::vector<double>& s, const TypeDProblem& problem, double scale) {
  const FormField w = candidate(b, s, scale, problem);
  const ScalarField ell = volume_log(w, problem);
  return (ell * half_invariant_ref(problem)) + pi_tensor(problem.j, w);
}

FormField linearized_solve(const ScalarField& rhs0, const FormField& rhs2, const MetricField& g, double tol) {
  const LinearSolver solver(g);
  const double scale0 = std::max(1.0, rhs0.values.cwiseAbs().maxCoeff());
  if (std::abs(rhs0.values.mean()) > tol * scale0) {
    throw Error(ErrorKind::RhsNotInRange, "scalar right-hand side has a nonzero mean");
  }
  const double scale2 = std::max(1.0, rhs2.max_abs());
  const FormField sd = self_dual_part(rhs2, g);
  if ((rhs2 - sd).max_abs() > tol * scale2) {
    throw Error(ErrorKind::RhsNotInRange, "2-form right-hand side is not self-dual");
  }
  auto c = solver.coefficients(sd);
  for (int a = 0; a < 3; ++a) {
    if (std::abs(c[a].mean()) > tol * scale2) {
      throw Error(ErrorKind::RhsNotInRange, "2-form right-hand side has a harmonic self-dual component");
    }
  }
  return solver.solve(rhs0.values, c);
}

double taming_margin(const FormField& omega, const ACSField& j) {
  double out = 1e300;
  for (std::size_t x = 0; x < omega.chart.points(); ++x) {
    const Eigen::Matrix4d m = omega.two_form_at(x).matrix() * j.j[x];
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
    out = std::min(out, es.eigenvalues().minCoeff());
  }
  return out;
}

CYSolution solve_type_D(const TypeDProblem& problem, const CYOptions& options) {
  return solve_type_D(problem, FormField::zero(problem.j.chart, 1), std::vector<double>(problem.chi.size(), 0.0),
                      options);
}

CYSolution solve_type_D(const TypeDProblem& p, const FormField& b0, const std::vector<double>& s0,
                        const CYOptions& options) {
  const GridChart& chart = p.j.chart;
  const std::size_t n = chart.points();
  const auto nn = static_cast<Eigen::Index>(n);
  const MetricField& g = p.g_ref;
  const LinearSolver solver(g);
  const int r = static_cast<int>(p.chi.size());

  if (!(taming_margin(p.omega_ref, p.j) > 0.0)) {
    throw Error(ErrorKind::TamingLost, "the reference form does not tame J");
  }

  const FormField half_inv = half_invariant_ref(p);
  const double omega_l2 = l2_inner(p.omega_ref, p.omega_ref, g);

  // Packed vectors: [scalar | six 2-form components], all filtered, the
  // 2-form part self-dual.
  auto pack = [&](const Eigen::VectorXd& s0v, const FormField& two) {
    const FormField sd = filtered(self_dual_part(two, g));
    Eigen::VectorXd out(7 * nn);
    const auto sp = Spectral::get(chart);
    out.head(nn) = sp->filter(s0v);
    for (int k = 0; k < 6; ++k) out.segment((k + 1) * nn, nn) = sd.components[k];
    return out;
  };
  auto unpack_two = [&](const Eigen::VectorXd& y) {
    FormField two = FormField::zero(chart, 2);
    for (int k = 0; k < 6; ++k) two.components[k] = y.segment((k + 1) * nn, nn);
    return two;
  };
  struct Step {
    FormField b;
    std::vector<double> s;
    double scale = 0.0;
  };
  auto precondition = [&](const Eigen::VectorXd& y) {
    const FormField two = unpack_two(y);
    Step out;
    for (int i = 0; i < r; ++i) out.s.push_back(l2_inner(two, p.chi[i], g));
    out.scale = l2_inner(two, p.omega_ref, g) / omega_l2;
    Eigen::VectorXd y0 = y.head(nn);
    y0.array() -= y0.mean();
    auto c = solver.coefficients(two);
    for (auto& ci : c) ci.array() -= ci.mean();
    out.b = solver.solve(y0, c);
    return out;
  };

  CYSolution sol;
  sol.b = b0;
  sol.s = s0;
  FormField w = candidate(sol.b, sol.s, sol.scale, p);
  FormField phi = phi_residual(sol.b, sol.s, p, sol.scale);
  auto merit = [&](const FormField& b, const FormField& ph) {
    return pack(codiff(b, g).components[0], ph).norm();
  };
  double current = merit(sol.b, phi);
  sol.residual_history.push_back(phi.max_abs());

  for (int it = 0; it < options.max_newton && sol.residual_history.back() > options.tolerance; ++it) {
    const ScalarField pf = pfaffian_field(w);
    auto jacobian = [&](const Step& st) {
      FormField dw = ext_d(st.b) + st.scale * p.omega_ref;
      for (int i = 0; i < r; ++i) dw += st.s[i] * p.chi[i];
      ScalarField dl = pfaffian_derivative(w, dw);
      dl.values.array() /= pf.values.array();
      FormField out = (dl * half_inv) + pi_tensor(p.j, dw);
      return pack(codiff(st.b, g).components[0], out);
    };
    const Eigen::VectorXd rhs = -pack(codiff(sol.b, g).components[0], phi);
    auto op = [&](const Eigen::VectorXd& y) { return jacobian(precondition(y)); };
    const auto krylov = linalg::gmres(op, rhs, {}, options.krylov_tolerance, options.max_krylov, 80);
    const Step step = precondition(krylov.x);

    double lambda = 1.0;
    bool accepted = false;
    bool degenerate = false;
    for (int halving = 0; halving < 20; ++halving) {
      FormField tb = sol.b + lambda * step.b;
      std::vector<double> ts = sol.s;
      for (int i = 0; i < r; ++i) ts[i] += lambda * step.s[i];
      const double tscale = sol.scale + lambda * step.scale;
      try {
        FormField tphi = phi_residual(tb, ts, p, tscale);
        const double m = merit(tb, tphi);
        if (m < current) {
          sol.b = std::move(tb);
          sol.s = std::move(ts);
          sol.scale = tscale;
          phi = std::move(tphi);
          current = m;
          accepted = true;
          break;
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::DegenerateCandidate) throw;
        degenerate = true;
      }
      lambda *= 0.5;
    }
    sol.iterations = it + 1;
    if (!accepted) {
      if (degenerate) {
        throw Error(ErrorKind::TamingLost, "every damped Newton step leaves the positive cone");
      }
      break;
    }
    w = candidate(sol.b, sol.s, sol.scale, p);
    sol.residual_history.push_back(phi.max_abs());
    const double last = sol.residual_history.back();
    if (last < options.accept_tolerance && last > 0.5 * sol.residual_history[sol.residual_history.size() - 2]) break;
  }

  sol.omega = candidate(sol.b, sol.s, sol.scale, p);
  const ScalarField pf = pfaffian_field(sol.omega);
  const ScalarField pf_ref = pfaffian_field(p.omega_ref);
  const Eigen::ArrayXd target = p.F.values.array().exp() * pf_ref.values.array();
  sol.volume_defect = (pf.values.array() - target).abs().maxCoeff() / pf_ref.values.cwiseAbs().maxCoeff();
  sol.compatibility_defect = pi_tensor(p.j, sol.omega).max_abs();
  sol.closedness_defect = ext_d(sol.omega).max_abs();
  sol.taming_margin = taming_margin(sol.omega, p.j);
  sol.gauge_defect = codiff(sol.b, g).max_abs();

  const double final_residual = sol.residual_history.back();
  if (!(final_residual <= std::max(options.tolerance, options.accept_tolerance))) {
    std::ostringstream msg;
    msg << "Newton stalled; residual history:";
    for (double h : sol.residual_history) msg << ' ' << h;
    throw Error(ErrorKind::NewtonDivergence, msg.str());
  }
  return sol;
}

std::vector<TwoFormValue> kahler_rays(const ACSValue& j, double t) {
  const TwoFormValue omega = fundamental_form(average_metric(MetricValue::euclidean(), j), j);
  std::vector<TwoFormValue> out{omega};
  for (const auto& sigma : flat_anti_self_dual_basis()) out.push_back(omega + t * split_j(sigma, j).first);
  return out;
}

SemicontinuityReport semicontinuity_experiment(const std::vector<double>& samples, const ACSPath& path,
                                               const ACSValue& base_j, const std::vector<TwoFormValue>& ray_forms,
                                               const CYOptions& cy_options, const HMinusOptions& h_options) {
  SemicontinuityReport report;
  auto measure = [&](const ACSField& j, int& hm, int& hp) {
    const MetricField g = average_metric(MetricField::flat(j.chart), j);
    hp = h_plus(g, j, h_options);
    hm = torus_betti(2) - hp;
  };
  const ACSField base = path(0.0);
  measure(base, report.base_h_minus, report.base_h_plus);

  for (double t : samples) {
    SemicontinuitySample sample;
    sample.t = t;
    const ACSField j = path(t);
    measure(j, sample.h_minus, sample.h_plus);
    Eigen::MatrixXd classes(6, 0);
    sample.all_solved = true;
    for (const auto& ray : ray_forms) {
      RayOutcome out;
      try {
        const TypeDProblem problem = make_type_d_problem(j, ray, base_j, ScalarField::constant(j.chart, 0.0));
        const CYSolution sol = solve_type_D(problem, cy_options);
        out.solved = true;
        out.iterations = sol.iterations;
        out.residual = sol.residual_history.back();
        for (int k = 0; k < 6; ++k) out.cohomology_class[k] = sol.omega.components[k].mean();
        classes.conservativeResize(6, classes.cols() + 1);
        for (int k = 0; k < 6; ++k) classes(k, classes.cols() - 1) = out.cohomology_class[k];
      } catch (const Error& e) {
        out.error = e.what();
        sample.all_solved = false;
      }
      sample.rays.push_back(out);
    }
    if (classes.cols() > 0) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(classes);
      const auto& sv = svd.singularValues();
      for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv[i] > 1e-8 * sv[0]) ++sample.class_rank;
      }
    }
    sample.inequalities_hold = sample.h_plus >= report.base_h_plus && sample.h_minus <= report.base_h_minus;
    report.samples.push_back(std::move(sample));
  }
  return report;
}

}  // namespace acslab
