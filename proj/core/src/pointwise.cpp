#include "acslab/pointwise.hpp"

#include <algorithm>

#include "acslab/errors.hpp"

namespace acslab {
namespace {

constexpr std::array<std::pair<int, int>, 6> kPairs{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

double relative(double residual, double scale) { return residual / std::max(1.0, scale); }

}  // namespace

TwoFormValue TwoFormValue::from_matrix(const Eigen::Matrix4d& a) {
  TwoFormValue out;
  for (int k = 0; k < 6; ++k) {
    const auto [i, j] = kPairs[k];
    out.c[k] = 0.5 * (a(i, j) - a(j, i));
  }
  return out;
}

TwoFormValue TwoFormValue::from_coeffs(const forms::Coeffs& v) {
  TwoFormValue out;
  for (int k = 0; k < 6; ++k) out.c[k] = v[k];
  return out;
}

Eigen::Matrix4d TwoFormValue::matrix() const {
  Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
  for (int k = 0; k < 6; ++k) {
    const auto [i, j] = kPairs[k];
    a(i, j) = c[k];
    a(j, i) = -c[k];
  }
  return a;
}

forms::Coeffs TwoFormValue::coeffs() const {
  forms::Coeffs v(6);
  for (int k = 0; k < 6; ++k) v[k] = c[k];
  return v;
}

TwoFormValue TwoFormValue::operator+(const TwoFormValue& o) const {
  TwoFormValue out;
  for (int k = 0; k < 6; ++k) out.c[k] = c[k] + o.c[k];
  return out;
}

TwoFormValue TwoFormValue::operator-(const TwoFormValue& o) const {
  TwoFormValue out;
  for (int k = 0; k < 6; ++k) out.c[k] = c[k] - o.c[k];
  return out;
}

TwoFormValue TwoFormValue::operator*(double s) const {
  TwoFormValue out;
  for (int k = 0; k < 6; ++k) out.c[k] = s * c[k];
  return out;
}

double TwoFormValue::max_abs() const {
  double m = 0.0;
  for (double v : c) m = std::max(m, std::abs(v));
  return m;
}

TwoFormValue basis_form(int i, int j) {
  Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
  a(i, j) = 1.0;
  a(j, i) = -1.0;
  return TwoFormValue::from_matrix(a);
}

void MetricValue::validate() const {
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, g.cwiseAbs().maxCoeff())) {
    throw Error(ErrorKind::DegenerateMetric, "metric is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(g, Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues().minCoeff() > 0.0)) {
    throw Error(ErrorKind::DegenerateMetric, "metric is not positive definite");
  }
}

ACSValue ACSValue::standard() {
  Eigen::Matrix4d j = Eigen::Matrix4d::Zero();
  j(1, 0) = 1.0;
  j(0, 1) = -1.0;
  j(3, 2) = 1.0;
  j(2, 3) = -1.0;
  return {j};
}

double ACSValue::square_residual() const {
  return (j * j + Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff();
}

double inner(const TwoFormValue& a, const TwoFormValue& b, const MetricValue& g) {
  const Eigen::Matrix4d gi = g.inverse();
  return 0.5 * (gi * a.matrix() * gi * b.matrix().transpose()).trace();
}

double norm2(const TwoFormValue& a, const MetricValue& g) { return inner(a, a, g); }

TwoFormValue pullback_by(const TwoFormValue& alpha, const ACSValue& j) {
  return TwoFormValue::from_matrix(j.j.transpose() * alpha.matrix() * j.j);
}

std::pair<TwoFormValue, TwoFormValue> split_j(const TwoFormValue& alpha, const ACSValue& j) {
  const TwoFormValue pulled = pullback_by(alpha, j);
  return {(alpha + pulled) * 0.5, (alpha - pulled) * 0.5};
}

TwoFormValue j_act(const TwoFormValue& beta, const ACSValue& j, double tol) {
  const auto [inv, anti] = split_j(beta, j);
  if (relative(inv.max_abs(), beta.max_abs()) > tol) {
    throw Error(ErrorKind::InputNotAntiInvariant,
                "j_act requires a J-anti-invariant form (invariant part " +
                    std::to_string(inv.max_abs()) + ")");
  }
  return TwoFormValue::from_matrix(-j.j.transpose() * beta.matrix());
}

TwoFormValue hodge_star(const TwoFormValue& alpha, const MetricValue& g) {
  g.validate();
  return TwoFormValue::from_coeffs(forms::star(2, alpha.coeffs(), g.inverse(), g.sqrt_det()));
}

double compatibility_residual(const MetricValue& g, const ACSValue& j) {
  const double scale = std::max(1.0, g.g.cwiseAbs().maxCoeff());
  return (j.j.transpose() * g.g * j.j - g.g).cwiseAbs().maxCoeff() / scale;
}

TwoFormValue fundamental_form(const MetricValue& g, const ACSValue& j, double tol) {
  if (compatibility_residual(g, j) > tol || j.square_residual() > tol) {
    throw Error(ErrorKind::IncompatiblePair, "g(J·,J·) != g(·,·) or J² != −Id");
  }
  const TwoFormValue omega = TwoFormValue::from_matrix(j.j.transpose() * g.g);
  if (!(pfaffian(omega) > 0.0)) {
    throw Error(ErrorKind::IncompatiblePair, "J does not induce the reference orientation");
  }
  return omega;
}

ACSValue acs_from_form(const MetricValue& g, const TwoFormValue& omega_tilde, double tol) {
  g.validate();
  const double n2 = norm2(omega_tilde, g);
  const double sd_defect = (hodge_star(omega_tilde, g) - omega_tilde).max_abs();
  if (std::abs(n2 - 2.0) > tol * 2.0 || sd_defect > tol * std::max(1.0, omega_tilde.max_abs())) {
    throw Error(ErrorKind::NotOnTwistorFiber,
                "need a self-dual form with |ω|² = 2 (norm² " + std::to_string(n2) +
                    ", self-duality defect " + std::to_string(sd_defect) + ")");
  }
  return {-g.inverse() * omega_tilde.matrix()};
}

MetricValue average_metric(const MetricValue& g, const ACSValue& j) {
  MetricValue out{0.5 * (g.g + j.j.transpose() * g.g * j.j)};
  out.g = 0.5 * (out.g + out.g.transpose());
  out.validate();
  return out;
}

double pfaffian(const TwoFormValue& w) { return w[0] * w[5] - w[1] * w[4] + w[2] * w[3]; }

SplitBasis split_basis(const MetricValue& g, const ACSValue& j) {
  SplitBasis basis;
  basis.omega = fundamental_form(g, j);

  TwoFormValue best;
  double best_norm = -1.0;
  for (const auto& [a, b] : kPairs) {
    const auto anti = split_j(basis_form(a, b), j).second;
    const double n = norm2(anti, g);
    if (n > best_norm) {
      best_norm = n;
      best = anti;
    }
  }
  const TwoFormValue phi = best * std::sqrt(2.0 / best_norm);
  basis.minus_basis = {phi, j_act(phi, j, 1e-8)};

  int found = 0;
  for (const auto& [a, b] : kPairs) {
    if (found == 3) break;
    const TwoFormValue e = basis_form(a, b);
    TwoFormValue asd = (e - hodge_star(e, g)) * 0.5;
    for (int k = 0; k < found; ++k) {
      asd = asd - basis.asd_basis[k] * (inner(asd, basis.asd_basis[k], g) / 2.0);
    }
    const double n = norm2(asd, g);
    if (n > 1e-8) basis.asd_basis[found++] = asd * std::sqrt(2.0 / n);
  }
  return basis;
}

std::array<TwoFormValue, 3> flat_self_dual_basis() {
  return {basis_form(0, 1) + basis_form(2, 3), basis_form(0, 2) - basis_form(1, 3),
          basis_form(0, 3) + basis_form(1, 2)};
}

std::array<TwoFormValue, 3> flat_anti_self_dual_basis() {
  return {basis_form(0, 1) - basis_form(2, 3), basis_form(0, 2) + basis_form(1, 3),
          basis_form(0, 3) - basis_form(1, 2)};
}

}  // namespace acslab
