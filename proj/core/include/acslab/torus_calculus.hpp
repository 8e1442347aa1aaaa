#pragma once

// Exterior calculus on the flat 4-torus by Fourier collocation.
//
// d is applied in Fourier space, so d∘d vanishes identically there. The
// codifferential is δ = −*d* with a pointwise Hodge star; on the grid it is
// exactly the adjoint of d for the quadrature inner product, because the
// spectral derivative matrices are skew-symmetric.

#include <vector>

#include <Eigen/Dense>

#include "acslab/grid.hpp"

namespace acslab {

struct SolverOptions {
  double relative_tolerance = 1e-10;
  int max_iterations = 500;
};

FormField ext_d(const FormField& field);

/// Euclidean transpose of ext_d on grid values (the flat codifferential).
FormField ext_d_transpose(const FormField& field);

FormField hodge_star(const FormField& field, const MetricField& g);

FormField codiff(const FormField& field, const MetricField& g);

/// Hodge Laplacian dδ + δd.
FormField hodge_laplacian(const FormField& field, const MetricField& g);

FormField wedge(const FormField& a, const FormField& b);

/// Pointwise ⟨a,b⟩_g.
ScalarField pointwise_inner(const FormField& a, const FormField& b, const MetricField& g);

/// Quadrature L² product ∫⟨a,b⟩_g dV_g.
double l2_inner(const FormField& a, const FormField& b, const MetricField& g);
double l2_norm(const FormField& a, const MetricField& g);

/// ∫ of a top-degree form.
double integrate_top(const FormField& top);
/// ∫ f dV_g.
double integrate(const ScalarField& f, const MetricField& g);

/// Drops Fourier modes touching the Nyquist frequency, component-wise.
FormField filter(const FormField& field);

/// Applies the metric weight √det g · Λ^p(g^{-1}) pointwise (no cell volume).
FormField apply_metric_weight(const FormField& field, const MetricField& g);

struct KrylovReport {
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Least-squares exact part: the 1-form η (mean zero, band-limited) that
/// minimizes ‖α − dη‖_{L²(g)}. Throws SolverDivergence.
FormField exact_potential(const FormField& alpha, const MetricField& g,
                          const SolverOptions& options = {}, KrylovReport* report = nullptr);

struct HarmonicBasis {
  int degree = 2;
  std::vector<FormField> basis;
  Eigen::MatrixXd gram;
  Eigen::MatrixXd intersection;
  int b_plus = 0;
  int b_minus = 0;
};

struct HodgeParts {
  FormField harmonic;
  FormField exact;
  FormField coexact;
};

/// Harmonic 2-forms for g: each flat harmonic representative corrected by
/// an exact form, then L²-orthonormalized. Throws DimensionMismatch.
HarmonicBasis harmonic_basis(const MetricField& g, const SolverOptions& options = {});

/// L²-orthonormal basis of g-harmonic g-self-dual 2-forms.
std::vector<FormField> sd_harmonic_basis(const MetricField& g, const SolverOptions& options = {});
std::vector<FormField> sd_harmonic_basis(const MetricField& g, const HarmonicBasis& harmonic);

HodgeParts hodge_decompose(const FormField& alpha, const MetricField& g,
                           const SolverOptions& options = {});
HodgeParts hodge_decompose(const FormField& alpha, const MetricField& g,
                           const HarmonicBasis& harmonic, const SolverOptions& options = {});

/// Betti numbers of T^4.
constexpr int torus_betti(int p) { return p == 0 || p == 4 ? 1 : (p == 2 ? 6 : 4); }

}  // namespace acslab
