#include "acslab/torus_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "acslab/eigensolver.hpp"
#include "acslab/errors.hpp"
#include "acslab/spectral.hpp"

namespace acslab {
namespace {

void require_same_chart(const GridChart& a, const GridChart& b) {
  if (!(a == b)) throw Error(ErrorKind::DimensionMismatch, "fields live on different grids");
}

Eigen::VectorXd flatten(const FormField& f) {
  const Eigen::Index n = static_cast<Eigen::Index>(f.chart.points());
  Eigen::VectorXd v(n * static_cast<Eigen::Index>(f.components.size()));
  for (std::size_t k = 0; k < f.components.size(); ++k) {
    v.segment(static_cast<Eigen::Index>(k) * n, n) = f.components[k];
  }
  return v;
}

FormField unflatten(const GridChart& chart, int degree, const Eigen::VectorXd& v) {
  FormField f = FormField::zero(chart, degree);
  const Eigen::Index n = static_cast<Eigen::Index>(chart.points());
  for (std::size_t k = 0; k < f.components.size(); ++k) {
    f.components[k] = v.segment(static_cast<Eigen::Index>(k) * n, n);
  }
  return f;
}

// Applies a constant linear map on coefficient space to every point.
FormField apply_constant(const FormField& field, int out_degree, const Eigen::MatrixXd& m) {
  FormField out = FormField::zero(field.chart, out_degree);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) != 0.0) out.components[i] += m(i, j) * field.components[j];
    }
  }
  return out;
}

Eigen::MatrixXd star_matrix(int degree, const Eigen::Matrix4d& g_inv, double sqrt_det) {
  const int n = forms::dimension(degree);
  Eigen::MatrixXd m(forms::dimension(4 - degree), n);
  for (int j = 0; j < n; ++j) {
    forms::Coeffs e = forms::Coeffs::Zero(n);
    e[j] = 1.0;
    m.col(j) = forms::star(degree, e, g_inv, sqrt_det);
  }
  return m;
}

}  // namespace

FormField ext_d(const FormField& field) {
  if (field.degree >= 4) throw Error(ErrorKind::DegreeOverflow, "d of a 4-form");
  const auto sp = Spectral::get(field.chart);
  const int p = field.degree;
  const std::size_t ns = sp->spectrum_size();
  std::vector<Spectral::Spectrum> acc(forms::dimension(p + 1), Spectral::Spectrum(ns));
  for (int k = 0; k < forms::dimension(p); ++k) {
    const Spectral::Spectrum fk = sp->forward(field.components[k]);
    for (int i = 0; i < 4; ++i) {
      const auto si = forms::prepend(i, p, k);
      if (si.sign == 0) continue;
      auto& target = acc[si.position];
      for (std::size_t s = 0; s < ns; ++s) {
        target[s] += static_cast<double>(si.sign) * sp->derivative_symbol(s, i) * fk[s];
      }
    }
  }
  FormField out = FormField::zero(field.chart, p + 1);
  for (int k = 0; k < forms::dimension(p + 1); ++k) out.components[k] = sp->inverse(std::move(acc[k]));
  return out;
}

FormField ext_d_transpose(const FormField& field) {
  if (field.degree <= 0) throw Error(ErrorKind::DegreeOverflow, "codifferential of a function");
  const auto sp = Spectral::get(field.chart);
  const int p = field.degree - 1;
  const std::size_t ns = sp->spectrum_size();
  std::vector<Spectral::Spectrum> hat;
  hat.reserve(field.components.size());
  for (const auto& c : field.components) hat.push_back(sp->forward(c));
  FormField out = FormField::zero(field.chart, p);
  for (int k = 0; k < forms::dimension(p); ++k) {
    Spectral::Spectrum acc(ns);
    for (int i = 0; i < 4; ++i) {
      const auto si = forms::prepend(i, p, k);
      if (si.sign == 0) continue;
      const auto& src = hat[si.position];
      for (std::size_t s = 0; s < ns; ++s) {
        acc[s] -= static_cast<double>(si.sign) * sp->derivative_symbol(s, i) * src[s];
      }
    }
    out.components[k] = sp->inverse(std::move(acc));
  }
  return out;
}

FormField hodge_star(const FormField& field, const MetricField& g) {
  require_same_chart(field.chart, g.chart);
  const int p = field.degree;
  if (g.constant) return apply_constant(field, 4 - p, star_matrix(p, g.g_inv[0], g.sqrt_det[0]));
  FormField out = FormField::zero(field.chart, 4 - p);
  for (std::size_t x = 0; x < field.chart.points(); ++x) {
    out.set(x, forms::star(p, field.at(x), g.g_inv[x], g.sqrt_det[x]));
  }
  return out;
}

FormField codiff(const FormField& field, const MetricField& g) {
  if (field.degree <= 0) throw Error(ErrorKind::DegreeOverflow, "codifferential of a function");
  FormField out = hodge_star(ext_d(hodge_star(field, g)), g);
  out *= -1.0;
  return out;
}

FormField hodge_laplacian(const FormField& field, const MetricField& g) {
  FormField out = FormField::zero(field.chart, field.degree);
  if (field.degree > 0) out += ext_d(codiff(field, g));
  if (field.degree < 4) out += codiff(ext_d(field), g);
  return out;
}

FormField wedge(const FormField& a, const FormField& b) {
  require_same_chart(a.chart, b.chart);
  const int p = a.degree;
  const int q = b.degree;
  if (p + q > 4) throw Error(ErrorKind::DegreeOverflow, "wedge degree exceeds 4");
  FormField out = FormField::zero(a.chart, p + q);
  for (int i = 0; i < forms::dimension(p); ++i) {
    forms::Coeffs ei = forms::Coeffs::Zero(forms::dimension(p));
    ei[i] = 1.0;
    for (int j = 0; j < forms::dimension(q); ++j) {
      forms::Coeffs ej = forms::Coeffs::Zero(forms::dimension(q));
      ej[j] = 1.0;
      const forms::Coeffs w = forms::wedge(p, ei, q, ej);
      for (int k = 0; k < w.size(); ++k) {
        if (w[k] != 0.0) {
          out.components[k].array() += w[k] * a.components[i].array() * b.components[j].array();
        }
      }
    }
  }
  return out;
}

FormField apply_metric_weight(const FormField& field, const MetricField& g) {
  require_same_chart(field.chart, g.chart);
  const int p = field.degree;
  if (g.constant) {
    const Eigen::MatrixXd m = g.sqrt_det[0] * forms::compound(g.g_inv[0], p);
    return apply_constant(field, p, m);
  }
  FormField out = FormField::zero(field.chart, p);
  for (std::size_t x = 0; x < field.chart.points(); ++x) {
    out.set(x, g.sqrt_det[x] * (forms::compound(g.g_inv[x], p) * field.at(x)));
  }
  return out;
}

ScalarField pointwise_inner(const FormField& a, const FormField& b, const MetricField& g) {
  require_same_chart(a.chart, b.chart);
  require_same_chart(a.chart, g.chart);
  if (a.degree != b.degree) throw Error(ErrorKind::DimensionMismatch, "inner product of mixed degrees");
  ScalarField out = ScalarField::constant(a.chart, 0.0);
  const int p = a.degree;
  if (g.constant) {
    const forms::CompoundMatrix m = forms::compound(g.g_inv[0], p);
    for (int i = 0; i < m.rows(); ++i) {
      for (int j = 0; j < m.cols(); ++j) {
        if (m(i, j) != 0.0) {
          out.values.array() += m(i, j) * a.components[i].array() * b.components[j].array();
        }
      }
    }
    return out;
  }
  for (std::size_t x = 0; x < a.chart.points(); ++x) {
    out.values[x] = forms::inner(p, a.at(x), b.at(x), g.g_inv[x]);
  }
  return out;
}

double l2_inner(const FormField& a, const FormField& b, const MetricField& g) {
  return integrate(pointwise_inner(a, b, g), g);
}

double l2_norm(const FormField& a, const MetricField& g) { return std::sqrt(l2_inner(a, a, g)); }

double integrate_top(const FormField& top) {
  if (top.degree != 4) throw Error(ErrorKind::DimensionMismatch, "integrand is not a 4-form");
  return top.components[0].sum() * top.chart.cell_volume();
}

double integrate(const ScalarField& f, const MetricField& g) {
  require_same_chart(f.chart, g.chart);
  const Eigen::Map<const Eigen::VectorXd> w(g.sqrt_det.data(), static_cast<Eigen::Index>(g.sqrt_det.size()));
  return f.values.dot(w) * f.chart.cell_volume();
}

FormField filter(const FormField& field) {
  const auto sp = Spectral::get(field.chart);
  FormField out = field;
  for (auto& c : out.components) c = sp->filter(c);
  return out;
}

FormField exact_potential(const FormField& alpha, const MetricField& g,
                          const SolverOptions& options, KrylovReport* report) {
  if (alpha.degree < 1) throw Error(ErrorKind::DegreeOverflow, "exact part of a function");
  require_same_chart(alpha.chart, g.chart);
  const GridChart chart = alpha.chart;
  const int p = alpha.degree - 1;
  const auto sp = Spectral::get(chart);

  auto op = [&](const Eigen::VectorXd& v) {
    return flatten(ext_d_transpose(apply_metric_weight(ext_d(unflatten(chart, p, v)), g)));
  };
  auto precond = [&](const Eigen::VectorXd& v) {
    FormField f = unflatten(chart, p, v);
    for (auto& c : f.components) c = sp->solve_shifted_laplacian(c, 0.0);
    return flatten(f);
  };
  const FormField weighted = apply_metric_weight(alpha, g);
  const Eigen::VectorXd rhs = flatten(ext_d_transpose(weighted));
  // Round-off in rhs is measured against |dᵀ| ~ k_max times the weighted data.
  const double min_period = *std::min_element(chart.periods.begin(), chart.periods.end());
  const double k_max = std::numbers::pi * chart.resolution / min_period;
  const double floor = 1e-13 * k_max * flatten(weighted).norm();
  if (rhs.norm() <= floor) {
    if (report) *report = {0, 0.0};
    return FormField::zero(chart, p);
  }
  const double tol = std::max(options.relative_tolerance, floor / rhs.norm());
  const auto result = linalg::pcg(op, rhs, precond, tol, options.max_iterations);
  if (report) *report = {result.iterations, result.relative_residual};
  if (!result.converged) {
    throw Error(ErrorKind::SolverDivergence,
                "exact potential solve stalled at relative residual " +
                    std::to_string(result.relative_residual));
  }
  return unflatten(chart, p, result.x);
}

HarmonicBasis harmonic_basis(const MetricField& g, const SolverOptions& options) {
  const GridChart& chart = g.chart;
  HarmonicBasis out;
  std::vector<FormField> raw;
  for (int k = 0; k < 6; ++k) {
    forms::Coeffs e = forms::Coeffs::Zero(6);
    e[k] = 1.0;
    FormField h = FormField::constant(chart, 2, e);
    if (!g.constant) h -= ext_d(exact_potential(h, g, options));
    raw.push_back(std::move(h));
  }
  Eigen::MatrixXd gram(6, 6);
  for (int i = 0; i < 6; ++i) {
    for (int j = i; j < 6; ++j) gram(i, j) = gram(j, i) = l2_inner(raw[i], raw[j], g);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  const Eigen::VectorXd ev = es.eigenvalues();
  if (!(ev.minCoeff() > 1e-10 * ev.maxCoeff())) {
    throw Error(ErrorKind::DimensionMismatch, "harmonic representatives are linearly dependent");
  }
  const Eigen::MatrixXd inv_sqrt =
      es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
  for (int i = 0; i < 6; ++i) {
    FormField h = FormField::zero(chart, 2);
    for (int j = 0; j < 6; ++j) h += inv_sqrt(j, i) * raw[j];
    out.basis.push_back(std::move(h));
  }
  out.gram.resize(6, 6);
  out.intersection.resize(6, 6);
  for (int i = 0; i < 6; ++i) {
    for (int j = i; j < 6; ++j) {
      out.gram(i, j) = out.gram(j, i) = l2_inner(out.basis[i], out.basis[j], g);
      out.intersection(i, j) = out.intersection(j, i) = integrate_top(wedge(out.basis[i], out.basis[j]));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> q(out.intersection);
  for (Eigen::Index i = 0; i < 6; ++i) {
    if (q.eigenvalues()[i] > 0.0) {
      ++out.b_plus;
    } else {
      ++out.b_minus;
    }
  }
  return out;
}

std::vector<FormField> sd_harmonic_basis(const MetricField& g, const HarmonicBasis& harmonic) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> q(harmonic.intersection);
  std::vector<FormField> out;
  for (Eigen::Index i = 0; i < q.eigenvalues().size(); ++i) {
    if (q.eigenvalues()[i] <= 0.0) continue;
    FormField h = FormField::zero(g.chart, 2);
    for (std::size_t j = 0; j < harmonic.basis.size(); ++j) {
      h += q.eigenvectors()(static_cast<Eigen::Index>(j), i) * harmonic.basis[j];
    }
    h *= 1.0 / l2_norm(h, g);
    out.push_back(std::move(h));
  }
  return out;
}

std::vector<FormField> sd_harmonic_basis(const MetricField& g, const SolverOptions& options) {
  return sd_harmonic_basis(g, harmonic_basis(g, options));
}

HodgeParts hodge_decompose(const FormField& alpha, const MetricField& g,
                           const HarmonicBasis& harmonic, const SolverOptions& options) {
  HodgeParts out;
  out.harmonic = FormField::zero(alpha.chart, alpha.degree);
  if (alpha.degree == 2) {
    for (const auto& h : harmonic.basis) out.harmonic += l2_inner(alpha, h, g) * h;
  } else if (alpha.degree == 0 || alpha.degree == 4) {
    const FormField unit = alpha.degree == 0 ? FormField::constant(alpha.chart, 0, forms::Coeffs::Ones(1))
                                             : hodge_star(FormField::constant(alpha.chart, 0, forms::Coeffs::Ones(1)), g);
    const double vol = integrate(ScalarField::constant(alpha.chart, 1.0), g);
    out.harmonic = (l2_inner(alpha, unit, g) / vol) * unit;
  } else {
    throw Error(ErrorKind::DimensionMismatch,
                "Hodge decomposition is implemented for degrees 0, 2 and 4, got " +
                    std::to_string(alpha.degree));
  }
  out.exact = alpha.degree > 0 ? ext_d(exact_potential(alpha, g, options))
                               : FormField::zero(alpha.chart, alpha.degree);
  out.coexact = alpha - out.harmonic - out.exact;
  return out;
}

HodgeParts hodge_decompose(const FormField& alpha, const MetricField& g, const SolverOptions& options) {
  if (alpha.degree != 2) return hodge_decompose(alpha, g, HarmonicBasis{}, options);
  return hodge_decompose(alpha, g, harmonic_basis(g, options), options);
}

}  // namespace acslab
