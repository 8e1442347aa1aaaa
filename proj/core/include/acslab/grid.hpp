#pragma once

// Fields on the flat 4-torus R^4 / (L1 Z × ... × L4 Z) sampled on a uniform
// N^4 collocation grid. Points are stored in C order with x^1 outermost.

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "acslab/forms.hpp"
#include "acslab/pointwise.hpp"

namespace acslab {

struct GridChart {
  int resolution = 8;
  std::array<double, 4> periods{1.0, 1.0, 1.0, 1.0};

  /// Throws ConfigError unless N is even and ≥ 4 and periods are positive.
  void validate() const;
  std::size_t points() const;
  double cell_volume() const;
  double volume() const;
  std::array<int, 4> multi_index(std::size_t p) const;
  Eigen::Vector4d coordinates(std::size_t p) const;

  bool operator==(const GridChart& o) const = default;
};

using PointFunction = std::function<double(const Eigen::Vector4d&)>;

struct ScalarField {
  GridChart chart;
  Eigen::VectorXd values;

  static ScalarField constant(const GridChart& chart, double value);
  static ScalarField sample(const GridChart& chart, const PointFunction& f);
  double mean() const { return values.mean(); }
};

/// Degree-p form field; components follow the lexicographic wedge basis.
struct FormField {
  GridChart chart;
  int degree = 0;
  std::vector<Eigen::VectorXd> components;

  static FormField zero(const GridChart& chart, int degree);
  static FormField constant(const GridChart& chart, int degree, const forms::Coeffs& value);
  static FormField constant(const GridChart& chart, const TwoFormValue& value);
  static FormField from_scalar(const ScalarField& f);

  forms::Coeffs at(std::size_t p) const;
  void set(std::size_t p, const forms::Coeffs& value);
  TwoFormValue two_form_at(std::size_t p) const;
  void set_two_form(std::size_t p, const TwoFormValue& value);
  ScalarField component(int k) const { return {chart, components[k]}; }

  FormField& operator+=(const FormField& o);
  FormField& operator-=(const FormField& o);
  FormField& operator*=(double s);
  /// Sup over grid points of the largest component.
  double max_abs() const;
};

FormField operator+(FormField a, const FormField& b);
FormField operator-(FormField a, const FormField& b);
FormField operator*(double s, FormField a);
/// Pointwise product with a function.
FormField operator*(const ScalarField& f, FormField a);

struct MetricField {
  GridChart chart;
  std::vector<Eigen::Matrix4d> g;
  std::vector<Eigen::Matrix4d> g_inv;
  std::vector<double> sqrt_det;
  bool constant = false;

  static MetricField flat(const GridChart& chart);
  static MetricField uniform(const GridChart& chart, const MetricValue& value);
  static MetricField from_values(const GridChart& chart, std::vector<Eigen::Matrix4d> values);
  /// e^{2u} g.
  MetricField conformal(const ScalarField& u) const;
  MetricValue at(std::size_t p) const { return {g[p]}; }
};

struct ACSField {
  GridChart chart;
  std::vector<Eigen::Matrix4d> j;

  static ACSField uniform(const GridChart& chart, const ACSValue& value);
  static ACSField standard(const GridChart& chart) { return uniform(chart, ACSValue::standard()); }
  ACSValue at(std::size_t p) const { return {j[p]}; }
  ACSField negated() const;
  double max_square_residual() const;
};

/// Sup over grid points of the pointwise compatibility residual.
double compatibility_residual(const MetricField& g, const ACSField& j);

/// Fundamental form field ω = g(J·,·). Throws IncompatiblePair.
FormField fundamental_form(const MetricField& g, const ACSField& j,
                           double tol = kDefaultAlgebraicTolerance);

/// J̃ from a field of self-dual forms of norm² 2. Throws NotOnTwistorFiber.
ACSField acs_from_form(const MetricField& g, const FormField& omega_tilde,
                       double tol = 1e-9);

MetricField average_metric(const MetricField& g, const ACSField& j);

}  // namespace acslab
