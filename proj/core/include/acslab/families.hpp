#pragma once

// Explicit families of almost complex structures built from self-dual forms
// fω + rα of norm² 2 on the twistor fiber of a fixed metric.

#include <array>
#include <vector>

#include "acslab/grid.hpp"

namespace acslab {

enum class Sign { Plus, Minus };

inline double sign_value(Sign s) { return s == Sign::Plus ? 1.0 : -1.0; }

/// e^1∧e^3 − e^2∧e^4.
TwoFormValue flat_beta();

/// ω̃ = fω + rα with f = ±(1 − ½r²|α|²)^{1/2}. Where r = 0 the output is ±J
/// exactly. Throws NormViolation.
ACSField build_from_alpha(const MetricField& g, const ACSField& j, const FormField& alpha,
                          const ScalarField& r, Sign sign = Sign::Plus);

/// r = 4/(2+|α|²), f = ±(2−|α|²)/(2+|α|²).
ACSField lee_structure(const MetricField& g, const ACSField& j, const FormField& alpha,
                       Sign sign = Sign::Plus);

/// ω̃ = c(±ω + α) with c = √2/√(2+|α|²).
ACSField conformal_structure(const MetricField& g, const ACSField& j, const FormField& alpha,
                             Sign sign = Sign::Plus);

/// ω̃ = fω + r·Jα, which keeps α anti-invariant. Throws NormViolation.
ACSField twisted_from_alpha(const MetricField& g, const ACSField& j, const FormField& alpha,
                            const ScalarField& r, Sign sign = Sign::Plus);

struct TorusFamily {
  ACSField j;
  FormField omega;
  int predicted_h_minus = 0;
};

/// J_{f,l,s} on the flat torus from fω + lβ + sJβ. Throws NormViolation.
TorusFamily torus_family(const ScalarField& f, const ScalarField& l, const ScalarField& s,
                         double rank_tol = 1e-8);

struct FamilyTriple {
  double f = 1.0;
  double l = 0.0;
  double s = 0.0;
};

/// Constant triple on the flat hyperkähler torus.
FamilyTriple h2_family(double k1, double k2, Sign sign = Sign::Plus);

/// Number of L² Gram eigenvalues above tol × the largest.
int rank_span(const std::vector<ScalarField>& functions, double tol = 1e-8);

/// Dimension of the closed forms anti-invariant for both structures.
/// Throws IdenticalStructures when J1 = ±J2 everywhere.
int intersection_dim(const ACSField& j1, const ACSField& j2, const MetricField& g, double tol = 1e-8);

/// exp(1 − 1/(1 − t²)) for t = |x − c|/radius < 1 in the periodic distance, else 0.
ScalarField bump(const GridChart& chart, const Eigen::Vector4d& center, double radius,
                 double amplitude = 1.0);

/// Two disjoint bumps carried by β and Jβ; torus_family predicts h⁻ = 0.
std::array<ScalarField, 3> two_bump_triple(const GridChart& chart, double amplitude = 0.8,
                                           double radius = 0.3);

}  // namespace acslab
