#include "acslab/anti_invariant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "acslab/eigensolver.hpp"
#include "acslab/errors.hpp"
#include "acslab/hermitian.hpp"
#include "acslab/spectral.hpp"

namespace acslab {
namespace {

using Mat6 = Eigen::Matrix<double, 6, 6>;

// A 6×6 matrix per grid point, collapsed to one when the input is uniform.
struct PointwiseMap {
  std::vector<Mat6> m;

  FormField apply(const FormField& f) const {
    FormField out = FormField::zero(f.chart, 2);
    if (m.size() == 1) {
      for (int i = 0; i < 6; ++i) {
        for (int k = 0; k < 6; ++k) {
          if (m[0](i, k) != 0.0) out.components[i] += m[0](i, k) * f.components[k];
        }
      }
      return out;
    }
    for (std::size_t x = 0; x < f.chart.points(); ++x) {
      Eigen::Matrix<double, 6, 1> v;
      for (int k = 0; k < 6; ++k) v[k] = f.components[k][x];
      const Eigen::Matrix<double, 6, 1> w = m[x] * v;
      for (int k = 0; k < 6; ++k) out.components[k][x] = w[k];
    }
    return out;
  }
};

bool uniform(const ACSField& j) {
  return std::all_of(j.j.begin(), j.j.end(), [&](const Eigen::Matrix4d& m) { return m == j.j[0]; });
}

Mat6 invariant_matrix(const ACSValue& j) {
  Mat6 m;
  for (int k = 0; k < 6; ++k) {
    TwoFormValue e;
    e[k] = 1.0;
    const auto inv = split_j(e, j).first;
    for (int i = 0; i < 6; ++i) m(i, k) = inv[i];
  }
  return m;
}

PointwiseMap invariant_map(const ACSField& j) {
  PointwiseMap out;
  if (uniform(j)) {
    out.m.push_back(invariant_matrix(j.at(0)));
  } else {
    out.m.reserve(j.j.size());
    for (std::size_t x = 0; x < j.j.size(); ++x) out.m.push_back(invariant_matrix(j.at(x)));
  }
  return out;
}

void require_anti_invariant(const FormField& psi, const ACSField& j) {
  if (psi.degree != 2) throw Error(ErrorKind::DimensionMismatch, "P acts on 2-forms");
  const double scale = std::max(1.0, psi.max_abs());
  const double r = invariant_part(psi, j).max_abs();
  if (r > 1e-9 * scale) {
    std::ostringstream msg;
    msg << "input has J-invariant part of size " << r;
    throw Error(ErrorKind::InputNotAntiInvariant, msg.str());
  }
}

Eigen::VectorXd flatten(const FormField& f) {
  const Eigen::Index n = static_cast<Eigen::Index>(f.chart.points());
  Eigen::VectorXd v(6 * n);
  for (int k = 0; k < 6; ++k) v.segment(k * n, n) = f.components[k];
  return v;
}

FormField unflatten(const GridChart& chart, const Eigen::Ref<const Eigen::VectorXd>& v) {
  FormField f = FormField::zero(chart, 2);
  const Eigen::Index n = static_cast<Eigen::Index>(chart.points());
  for (int k = 0; k < 6; ++k) f.components[k] = v.segment(k * n, n);
  return f;
}

}  // namespace

FormField invariant_part(const FormField& alpha, const ACSField& j) {
  return invariant_map(j).apply(alpha);
}

FormField anti_invariant_part(const FormField& alpha, const ACSField& j) {
  return alpha - invariant_part(alpha, j);
}

FormField lejmi_P(const FormField& psi, const MetricField& g, const ACSField& j) {
  require_anti_invariant(psi, j);
  return anti_invariant_part(ext_d(codiff(psi, g)), j);
}

FormField lejmi_P_laplacian(const FormField& psi, const MetricField& g, const ACSField& j) {
  require_anti_invariant(psi, j);
  const FormField lap = hodge_laplacian(psi, g);
  const FormField omega = fundamental_form(g, j, 1e-9);
  FormField out = 0.5 * lap;
  out -= 0.25 * (pointwise_inner(lap, omega, g) * omega);
  return out;
}

SpectralReport h_minus(const MetricField& g, const ACSField& j, const HMinusOptions& options) {
  const GridChart chart = g.chart;
  if (compatibility_residual(g, j) > 1e-9) {
    throw Error(ErrorKind::IncompatiblePair, "metric and almost complex structure are not compatible");
  }
  const auto sp = Spectral::get(chart);
  const double min_period = *std::min_element(chart.periods.begin(), chart.periods.end());
  const double kappa = options.penalty > 0.0 ? options.penalty
                                             : std::pow(2.0 * std::numbers::pi / min_period, 2);
  const PointwiseMap inv = invariant_map(j);

  // Weight maps for degrees 1..3 and the inverse weight on 1-forms.
  auto weight = [&](const FormField& f) { return apply_metric_weight(f, g); };
  auto weight1_inv = [&](FormField f) {
    for (std::size_t x = 0; x < chart.points(); ++x) {
      const Eigen::Vector4d v = g.g[x] * f.at(x) / g.sqrt_det[x];
      f.set(x, v);
    }
    return f;
  };
  auto filter_field = [&](FormField f) {
    for (auto& c : f.components) c = sp->filter(c);
    return f;
  };

  auto apply_k = [&](const FormField& x) {
    FormField out = ext_d_transpose(weight(ext_d(x)));
    const FormField w2x = weight(x);
    out += weight(ext_d(weight1_inv(ext_d_transpose(w2x))));
    out += kappa * weight(inv.apply(x));
    return filter_field(std::move(out));
  };
  auto apply_m = [&](const FormField& x) { return filter_field(weight(x)); };
  auto precond = [&](const FormField& r) {
    FormField out = r;
    for (auto& c : out.components) c = sp->solve_shifted_laplacian(c, kappa);
    return out;
  };
  auto block = [&](auto&& fn) {
    return [&, fn](const Eigen::MatrixXd& xs) {
      Eigen::MatrixXd out(xs.rows(), xs.cols());
      for (Eigen::Index c = 0; c < xs.cols(); ++c) out.col(c) = flatten(fn(unflatten(chart, xs.col(c))));
      return out;
    };
  };

  const Eigen::Index dim = 6 * static_cast<Eigen::Index>(chart.points());
  const int m = std::max(options.block, options.wanted);
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x0(dim, m);
  for (int c = 0; c < m; ++c) {
    FormField f = FormField::zero(chart, 2);
    for (auto& comp : f.components) {
      for (Eigen::Index i = 0; i < comp.size(); ++i) comp[i] = normal(rng);
      comp = sp->solve_shifted_laplacian(comp, kappa);
    }
    x0.col(c) = flatten(f);
  }

  linalg::LobpcgOptions lo;
  lo.wanted = options.wanted;
  lo.tol = options.residual_tolerance;
  lo.max_iter = options.max_iterations;
  lo.scale = kappa;
  const auto result = linalg::lobpcg(block(apply_k), block(apply_m), block(precond), x0, lo);
  if (!result.converged) {
    throw Error(ErrorKind::SolverDivergence,
                "eigensolver did not converge in " + std::to_string(result.iterations) + " iterations");
  }

  SpectralReport report;
  report.resolution = chart.resolution;
  report.iterations = result.iterations;
  for (Eigen::Index i = 0; i < result.values.size(); ++i) report.eigenvalues.push_back(0.5 * result.values[i]);
  const double top = std::abs(report.eigenvalues.back());
  report.tolerance = options.relative_threshold * top;
  int k = 0;
  while (k < static_cast<int>(report.eigenvalues.size()) && report.eigenvalues[k] < report.tolerance) ++k;
  report.kernel_dim = k;
  if (k == static_cast<int>(report.eigenvalues.size())) {
    report.gap_ratio = 0.0;
  } else {
    const double below = k > 0 ? std::abs(report.eigenvalues[k - 1]) : 0.0;
    report.gap_ratio = report.eigenvalues[k] / std::max(below, 1e-3 * report.tolerance);
  }
  for (int i = 0; i < k; ++i) {
    FormField f = unflatten(chart, result.vectors.col(i));
    f *= 1.0 / l2_norm(f, g);
    report.kernel.push_back(std::move(f));
  }
  if (options.throw_on_gap && report.gap_ratio < options.min_gap_ratio) {
    std::ostringstream msg;
    msg << "no clear spectral gap: eigenvalues";
    for (double e : report.eigenvalues) msg << ' ' << e;
    msg << ", threshold " << report.tolerance;
    throw Error(ErrorKind::GapUndetected, msg.str());
  }
  return report;
}

int h_minus_rank_test(const MetricField& g, const ACSField& j, const std::vector<FormField>& sd_basis,
                      double tol) {
  const FormField omega = fundamental_form(g, j, 1e-9);
  const int n = static_cast<int>(sd_basis.size());
  std::vector<ScalarField> pairing;
  for (const auto& psi : sd_basis) pairing.push_back(pointwise_inner(psi, omega, g));
  Eigen::MatrixXd gram(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      ScalarField prod = pairing[a];
      prod.values.array() *= pairing[b].values.array();
      gram(a, b) = gram(b, a) = integrate(prod, g);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  int rank = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (es.eigenvalues()[i] > tol * 2.0) ++rank;
  }
  return n - rank;
}

int h_minus_rank_test(const MetricField& g, const ACSField& j, double tol) {
  return h_minus_rank_test(g, j, sd_harmonic_basis(g), tol);
}

int h_plus(const MetricField& g, const ACSField& j, const HMinusOptions& options) {
  return torus_betti(2) - h_minus(g, j, options).kernel_dim;
}

std::string TameVerdict::label() const {
  std::string out = met ? "tamed-criterion-met" : "tamed-criterion-not-met";
  if (heuristic) out += " (heuristic)";
  return out;
}

TameVerdict tame_verdict(int b_plus, int h_minus_value, bool heuristic) {
  TameVerdict v;
  v.difference = b_plus - h_minus_value;
  v.met = v.difference >= 1;
  v.heuristic = heuristic;
  return v;
}

TameVerdict tame_indicator(const MetricField& g, const ACSField& j, const HMinusOptions& options) {
  const int hm = h_minus(g, j, options).kernel_dim;
  const bool integrable = nijenhuis_sup(j) < 1e-8;
  return tame_verdict(3, hm, !integrable);
}

std::vector<PathSample> path_scan(const std::vector<double>& samples, const ACSPath& path,
                                  const MetricRule& metric, const HMinusOptions& options) {
  std::vector<PathSample> out;
  for (double t : samples) {
    const ACSField j = path(t);
    const MetricField g = metric(j);
    const auto report = h_minus(g, j, options);
    out.push_back({t, report.kernel_dim, report.gap_ratio, false});
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i == 0 || i + 1 == out.size()) continue;
    out[i].flagged = out[i - 1].kernel_dim > out[i].kernel_dim && out[i + 1].kernel_dim > out[i].kernel_dim;
  }
  return out;
}

}  // namespace acslab
