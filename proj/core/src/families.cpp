#include "acslab/families.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "acslab/errors.hpp"
#include "acslab/torus_calculus.hpp"

namespace acslab {
namespace {

ACSField from_combination(const MetricField& g, const ACSField& j, const FormField& omega,
                          const ScalarField& f, const FormField& alpha, const ScalarField& r,
                          double sign) {
  FormField tilde = (f * omega) + (r * alpha);
  ACSField out = acs_from_form(g, tilde);
  for (std::size_t x = 0; x < out.j.size(); ++x) {
    if (r.values[x] == 0.0) out.j[x] = sign * j.j[x];
  }
  return out;
}

void require_norm(const ScalarField& r2a2) {
  const double worst = r2a2.values.maxCoeff();
  if (!(worst < 2.0)) {
    std::ostringstream msg;
    msg << "r²|α|² reaches " << worst << ", must stay below 2";
    throw Error(ErrorKind::NormViolation, msg.str());
  }
}

double periodic_offset(double x, double c, double period) {
  double d = std::fmod(x - c, period);
  if (d > 0.5 * period) d -= period;
  if (d < -0.5 * period) d += period;
  return d;
}

}  // namespace

TwoFormValue flat_beta() { return basis_form(0, 2) - basis_form(1, 3); }

ACSField build_from_alpha(const MetricField& g, const ACSField& j, const FormField& alpha,
                          const ScalarField& r, Sign sign) {
  const ScalarField a2 = pointwise_inner(alpha, alpha, g);
  ScalarField r2a2 = r;
  r2a2.values = r.values.array().square() * a2.values.array();
  require_norm(r2a2);
  ScalarField f = r2a2;
  f.values = sign_value(sign) * (1.0 - 0.5 * r2a2.values.array()).sqrt();
  return from_combination(g, j, fundamental_form(g, j), f, alpha, r, sign_value(sign));
}

ACSField lee_structure(const MetricField& g, const ACSField& j, const FormField& alpha, Sign sign) {
  const ScalarField a2 = pointwise_inner(alpha, alpha, g);
  ScalarField f = a2;
  ScalarField r = a2;
  f.values = sign_value(sign) * (2.0 - a2.values.array()) / (2.0 + a2.values.array());
  r.values = 4.0 / (2.0 + a2.values.array());
  return acs_from_form(g, (f * fundamental_form(g, j)) + (r * alpha));
}

ACSField conformal_structure(const MetricField& g, const ACSField& j, const FormField& alpha,
                             Sign sign) {
  const ScalarField a2 = pointwise_inner(alpha, alpha, g);
  ScalarField c = a2;
  c.values = std::sqrt(2.0) / (2.0 + a2.values.array()).sqrt();
  FormField tilde = sign_value(sign) * fundamental_form(g, j);
  tilde += alpha;
  return acs_from_form(g, c * tilde);
}

ACSField twisted_from_alpha(const MetricField& g, const ACSField& j, const FormField& alpha,
                            const ScalarField& r, Sign sign) {
  FormField jalpha = FormField::zero(alpha.chart, 2);
  for (std::size_t x = 0; x < alpha.chart.points(); ++x) {
    jalpha.set_two_form(x, j_act(alpha.two_form_at(x), j.at(x), 1e-9));
  }
  const ScalarField a2 = pointwise_inner(alpha, alpha, g);
  ScalarField r2a2 = r;
  r2a2.values = r.values.array().square() * a2.values.array();
  require_norm(r2a2);
  ScalarField f = r2a2;
  f.values = sign_value(sign) * (1.0 - 0.5 * r2a2.values.array()).sqrt();
  return from_combination(g, j, fundamental_form(g, j), f, jalpha, r, sign_value(sign));
}

TorusFamily torus_family(const ScalarField& f, const ScalarField& l, const ScalarField& s,
                         double rank_tol) {
  const GridChart& chart = f.chart;
  const Eigen::ArrayXd constraint =
      2.0 * f.values.array().square() + 2.0 * (l.values.array().square() + s.values.array().square());
  const double violation = (constraint - 2.0).abs().maxCoeff();
  if (violation > 1e-10) {
    std::ostringstream msg;
    msg << "2f² + |β|²(l² + s²) deviates from 2 by " << violation;
    throw Error(ErrorKind::NormViolation, msg.str());
  }
  const ACSValue jstd = ACSValue::standard();
  const TwoFormValue beta = flat_beta();
  const TwoFormValue jbeta = j_act(beta, jstd);
  const TwoFormValue omega = fundamental_form(MetricValue::euclidean(), jstd);
  TorusFamily out;
  out.omega = FormField::zero(chart, 2);
  for (std::size_t x = 0; x < chart.points(); ++x) {
    out.omega.set_two_form(x, f.values[x] * omega + l.values[x] * beta + s.values[x] * jbeta);
  }
  out.j = acs_from_form(MetricField::flat(chart), out.omega);
  ScalarField fp = f;
  ScalarField lp = l;
  ScalarField sp = s;
  fp.values *= 2.0;
  lp.values *= 2.0;
  sp.values *= 2.0;
  out.predicted_h_minus = 3 - rank_span({fp, lp, sp}, rank_tol);
  return out;
}

FamilyTriple h2_family(double k1, double k2, Sign sign) {
  const double beta_norm = std::sqrt(2.0);
  const double w = 1.0 / std::sqrt(beta_norm * beta_norm + 2.0 * (k1 * k1 + k2 * k2));
  const double pm = sign_value(sign);
  return {pm * beta_norm * w, pm * 2.0 * k1 * w / beta_norm, pm * 2.0 * k2 * w / beta_norm};
}

int rank_span(const std::vector<ScalarField>& functions, double tol) {
  const int n = static_cast<int>(functions.size());
  if (n == 0) return 0;
  const double cell = functions[0].chart.cell_volume();
  Eigen::MatrixXd gram(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) gram(a, b) = gram(b, a) = functions[a].values.dot(functions[b].values) * cell;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  const double top = es.eigenvalues().maxCoeff();
  if (!(top > 0.0)) return 0;
  int rank = 0;
  for (int i = 0; i < n; ++i) {
    if (es.eigenvalues()[i] > tol * top) ++rank;
  }
  return rank;
}

int intersection_dim(const ACSField& j1, const ACSField& j2, const MetricField& g, double tol) {
  double plus = 0.0;
  double minus = 0.0;
  for (std::size_t x = 0; x < j1.j.size(); ++x) {
    minus = std::max(minus, (j1.j[x] - j2.j[x]).cwiseAbs().maxCoeff());
    plus = std::max(plus, (j1.j[x] + j2.j[x]).cwiseAbs().maxCoeff());
  }
  if (minus < 1e-10 || plus < 1e-10) {
    throw Error(ErrorKind::IdenticalStructures, "the two structures agree up to sign everywhere");
  }
  const auto sd = sd_harmonic_basis(g);
  const FormField w1 = fundamental_form(g, j1, 1e-9);
  const FormField w2 = fundamental_form(g, j2, 1e-9);
  std::vector<ScalarField> p1;
  std::vector<ScalarField> p2;
  for (const auto& psi : sd) {
    p1.push_back(pointwise_inner(psi, w1, g));
    p2.push_back(pointwise_inner(psi, w2, g));
  }
  const int n = static_cast<int>(sd.size());
  Eigen::MatrixXd gram(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      ScalarField prod = p1[a];
      prod.values = p1[a].values.array() * p1[b].values.array() + p2[a].values.array() * p2[b].values.array();
      gram(a, b) = gram(b, a) = integrate(prod, g);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  int rank = 0;
  for (int i = 0; i < n; ++i) {
    if (es.eigenvalues()[i] > 2.0 * tol) ++rank;
  }
  return n - rank;
}

ScalarField bump(const GridChart& chart, const Eigen::Vector4d& center, double radius, double amplitude) {
  return ScalarField::sample(chart, [&](const Eigen::Vector4d& x) {
    double t2 = 0.0;
    for (int a = 0; a < 4; ++a) {
      const double d = periodic_offset(x[a], center[a], chart.periods[a]) / radius;
      t2 += d * d;
    }
    if (t2 >= 1.0) return 0.0;
    return amplitude * std::exp(1.0 - 1.0 / (1.0 - t2));
  });
}

std::array<ScalarField, 3> two_bump_triple(const GridChart& chart, double amplitude, double radius) {
  Eigen::Vector4d c1;
  Eigen::Vector4d c2;
  for (int a = 0; a < 4; ++a) {
    c1[a] = 0.25 * chart.periods[a];
    c2[a] = 0.75 * chart.periods[a];
  }
  ScalarField l = bump(chart, c1, radius, amplitude);
  ScalarField s = bump(chart, c2, radius, amplitude);
  ScalarField f = l;
  f.values = (1.0 - l.values.array().square() - s.values.array().square()).sqrt();
  return {f, l, s};
}

}  // namespace acslab
