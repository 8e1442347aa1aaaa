#pragma once

// Linear algebra of a single tangent space: metrics, almost complex
// structures and 2-forms on R^4, with the splittings between them.
//
// Conventions:
//   * vectors are columns; J acts on vectors, (JX)^i = J^i_k X^k;
//   * a 2-form α is stored by its six components α_ij (i<j) in the order
//     12, 13, 14, 23, 24, 34, and α(X,Y) = X^T A Y for the antisymmetric A;
//   * each e^i∧e^j has unit norm for the flat metric, so |ω|² = 2;
//   * the reference orientation is e^1∧e^2∧e^3∧e^4.

#include <array>
#include <cmath>
#include <utility>

#include <Eigen/Dense>

#include "acslab/forms.hpp"

namespace acslab {

inline constexpr double kDefaultAlgebraicTolerance = 1e-10;

struct TwoFormValue {
  std::array<double, 6> c{};

  static TwoFormValue from_matrix(const Eigen::Matrix4d& a);
  static TwoFormValue from_coeffs(const forms::Coeffs& v);
  Eigen::Matrix4d matrix() const;
  forms::Coeffs coeffs() const;

  double operator[](int k) const { return c[k]; }
  double& operator[](int k) { return c[k]; }

  TwoFormValue operator+(const TwoFormValue& o) const;
  TwoFormValue operator-(const TwoFormValue& o) const;
  TwoFormValue operator*(double s) const;
  double max_abs() const;
};

inline TwoFormValue operator*(double s, const TwoFormValue& a) { return a * s; }

/// Coordinate basis 2-form e^i∧e^j for 0-based i < j.
TwoFormValue basis_form(int i, int j);

struct MetricValue {
  Eigen::Matrix4d g = Eigen::Matrix4d::Identity();

  static MetricValue euclidean() { return {}; }
  /// Throws DegenerateMetric unless g is symmetric positive definite.
  void validate() const;
  Eigen::Matrix4d inverse() const { return g.inverse(); }
  double sqrt_det() const { return std::sqrt(g.determinant()); }
};

struct ACSValue {
  Eigen::Matrix4d j;

  /// Je1 = e2, Je3 = e4.
  static ACSValue standard();
  double square_residual() const;
  ACSValue operator-() const { return {-j}; }
};

/// Orthogonal frame of Λ^+_g adapted to a compatible pair.
struct SplitBasis {
  TwoFormValue omega;
  std::array<TwoFormValue, 2> minus_basis;
  std::array<TwoFormValue, 3> asd_basis;
};

double inner(const TwoFormValue& a, const TwoFormValue& b, const MetricValue& g);
double norm2(const TwoFormValue& a, const MetricValue& g);

/// α ↦ α(J·,J·).
TwoFormValue pullback_by(const TwoFormValue& alpha, const ACSValue& j);

/// Returns (J-invariant part, J-anti-invariant part).
std::pair<TwoFormValue, TwoFormValue> split_j(const TwoFormValue& alpha, const ACSValue& j);

/// Jα(X,Y) = −α(JX,Y) on Λ^-_J. Throws InputNotAntiInvariant.
TwoFormValue j_act(const TwoFormValue& beta, const ACSValue& j,
                   double tol = kDefaultAlgebraicTolerance);

TwoFormValue hodge_star(const TwoFormValue& alpha, const MetricValue& g);

/// ω(·,·) = g(J·,·). Throws IncompatiblePair.
TwoFormValue fundamental_form(const MetricValue& g, const ACSValue& j,
                              double tol = kDefaultAlgebraicTolerance);

/// Inverse of fundamental_form on the twistor fiber {ω̃ self-dual, |ω̃|² = 2}.
ACSValue acs_from_form(const MetricValue& g, const TwoFormValue& omega_tilde,
                       double tol = kDefaultAlgebraicTolerance);

/// ½(g + g(J·,J·)).
MetricValue average_metric(const MetricValue& g, const ACSValue& j);

/// Relative residual of g(J·,J·) = g(·,·).
double compatibility_residual(const MetricValue& g, const ACSValue& j);

/// Pf(ω) = ω12 ω34 − ω13 ω24 + ω14 ω23; ω∧ω = 2 Pf vol.
double pfaffian(const TwoFormValue& omega);

SplitBasis split_basis(const MetricValue& g, const ACSValue& j);

/// The three flat self-dual forms e12+e34, e13−e24, e14+e23.
std::array<TwoFormValue, 3> flat_self_dual_basis();
std::array<TwoFormValue, 3> flat_anti_self_dual_basis();

}  // namespace acslab
