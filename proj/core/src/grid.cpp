#include "acslab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "acslab/errors.hpp"

namespace acslab {

void GridChart::validate() const {
  if (resolution < 4 || resolution % 2 != 0) {
    throw Error(ErrorKind::ConfigError,
                "grid resolution must be even and >= 4, got " + std::to_string(resolution));
  }
  for (double l : periods) {
    if (!(l > 0.0) || !std::isfinite(l)) {
      throw Error(ErrorKind::ConfigError, "grid periods must be positive");
    }
  }
}

std::size_t GridChart::points() const {
  const auto n = static_cast<std::size_t>(resolution);
  return n * n * n * n;
}

double GridChart::cell_volume() const { return volume() / static_cast<double>(points()); }

double GridChart::volume() const { return periods[0] * periods[1] * periods[2] * periods[3]; }

std::array<int, 4> GridChart::multi_index(std::size_t p) const {
  std::array<int, 4> idx{};
  for (int a = 3; a >= 0; --a) {
    idx[a] = static_cast<int>(p % resolution);
    p /= resolution;
  }
  return idx;
}

Eigen::Vector4d GridChart::coordinates(std::size_t p) const {
  const auto idx = multi_index(p);
  Eigen::Vector4d x;
  for (int a = 0; a < 4; ++a) x[a] = periods[a] * idx[a] / resolution;
  return x;
}

ScalarField ScalarField::constant(const GridChart& chart, double value) {
  return {chart, Eigen::VectorXd::Constant(static_cast<Eigen::Index>(chart.points()), value)};
}

ScalarField ScalarField::sample(const GridChart& chart, const PointFunction& f) {
  ScalarField out{chart, Eigen::VectorXd(static_cast<Eigen::Index>(chart.points()))};
  for (std::size_t p = 0; p < chart.points(); ++p) out.values[p] = f(chart.coordinates(p));
  return out;
}

FormField FormField::zero(const GridChart& chart, int degree) {
  FormField f{chart, degree, {}};
  f.components.assign(forms::dimension(degree),
                      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(chart.points())));
  return f;
}

FormField FormField::constant(const GridChart& chart, int degree, const forms::Coeffs& value) {
  FormField f = zero(chart, degree);
  for (int k = 0; k < forms::dimension(degree); ++k) f.components[k].setConstant(value[k]);
  return f;
}

FormField FormField::constant(const GridChart& chart, const TwoFormValue& value) {
  return constant(chart, 2, value.coeffs());
}

FormField FormField::from_scalar(const ScalarField& f) { return {f.chart, 0, {f.values}}; }

forms::Coeffs FormField::at(std::size_t p) const {
  forms::Coeffs v(static_cast<Eigen::Index>(components.size()));
  for (std::size_t k = 0; k < components.size(); ++k) v[k] = components[k][p];
  return v;
}

void FormField::set(std::size_t p, const forms::Coeffs& value) {
  for (std::size_t k = 0; k < components.size(); ++k) components[k][p] = value[k];
}

TwoFormValue FormField::two_form_at(std::size_t p) const {
  TwoFormValue v;
  for (int k = 0; k < 6; ++k) v[k] = components[k][p];
  return v;
}

void FormField::set_two_form(std::size_t p, const TwoFormValue& value) {
  for (int k = 0; k < 6; ++k) components[k][p] = value[k];
}

FormField& FormField::operator+=(const FormField& o) {
  for (std::size_t k = 0; k < components.size(); ++k) components[k] += o.components[k];
  return *this;
}

FormField& FormField::operator-=(const FormField& o) {
  for (std::size_t k = 0; k < components.size(); ++k) components[k] -= o.components[k];
  return *this;
}

FormField& FormField::operator*=(double s) {
  for (auto& c : components) c *= s;
  return *this;
}

double FormField::max_abs() const {
  double m = 0.0;
  for (const auto& c : components) m = std::max(m, c.cwiseAbs().maxCoeff());
  return m;
}

FormField operator+(FormField a, const FormField& b) { return a += b; }
FormField operator-(FormField a, const FormField& b) { return a -= b; }
FormField operator*(double s, FormField a) { return a *= s; }

FormField operator*(const ScalarField& f, FormField a) {
  for (auto& c : a.components) c.array() *= f.values.array();
  return a;
}

MetricField MetricField::flat(const GridChart& chart) {
  return uniform(chart, MetricValue::euclidean());
}

MetricField MetricField::uniform(const GridChart& chart, const MetricValue& value) {
  value.validate();
  MetricField m;
  m.chart = chart;
  m.g.assign(chart.points(), value.g);
  m.g_inv.assign(chart.points(), value.g.inverse());
  m.sqrt_det.assign(chart.points(), value.sqrt_det());
  m.constant = true;
  return m;
}

MetricField MetricField::from_values(const GridChart& chart, std::vector<Eigen::Matrix4d> values) {
  MetricField m;
  m.chart = chart;
  m.g = std::move(values);
  m.g_inv.resize(m.g.size());
  m.sqrt_det.resize(m.g.size());
  m.constant = true;
  for (std::size_t p = 0; p < m.g.size(); ++p) {
    MetricValue{m.g[p]}.validate();
    m.g_inv[p] = m.g[p].inverse();
    m.sqrt_det[p] = std::sqrt(m.g[p].determinant());
    if (m.constant && (m.g[p] - m.g[0]).cwiseAbs().maxCoeff() != 0.0) m.constant = false;
  }
  return m;
}

MetricField MetricField::conformal(const ScalarField& u) const {
  std::vector<Eigen::Matrix4d> values(g.size());
  for (std::size_t p = 0; p < g.size(); ++p) values[p] = std::exp(2.0 * u.values[p]) * g[p];
  return from_values(chart, std::move(values));
}

ACSField ACSField::uniform(const GridChart& chart, const ACSValue& value) {
  return {chart, std::vector<Eigen::Matrix4d>(chart.points(), value.j)};
}

ACSField ACSField::negated() const {
  ACSField out = *this;
  for (auto& m : out.j) m = -m;
  return out;
}

double ACSField::max_square_residual() const {
  double r = 0.0;
  for (const auto& m : j) r = std::max(r, ACSValue{m}.square_residual());
  return r;
}

double compatibility_residual(const MetricField& g, const ACSField& j) {
  double r = 0.0;
  for (std::size_t p = 0; p < g.g.size(); ++p) {
    r = std::max(r, compatibility_residual(g.at(p), j.at(p)));
  }
  return r;
}

FormField fundamental_form(const MetricField& g, const ACSField& j, double tol) {
  FormField omega = FormField::zero(g.chart, 2);
  for (std::size_t p = 0; p < g.g.size(); ++p) {
    omega.set_two_form(p, fundamental_form(g.at(p), j.at(p), tol));
  }
  return omega;
}

ACSField acs_from_form(const MetricField& g, const FormField& omega_tilde, double tol) {
  ACSField out{g.chart, std::vector<Eigen::Matrix4d>(g.g.size())};
  for (std::size_t p = 0; p < g.g.size(); ++p) {
    out.j[p] = acs_from_form(g.at(p), omega_tilde.two_form_at(p), tol).j;
  }
  return out;
}

MetricField average_metric(const MetricField& g, const ACSField& j) {
  std::vector<Eigen::Matrix4d> values(g.g.size());
  for (std::size_t p = 0; p < g.g.size(); ++p) {
    values[p] = average_metric(g.at(p), j.at(p)).g;
  }
  return MetricField::from_values(g.chart, std::move(values));
}

}  // namespace acslab
