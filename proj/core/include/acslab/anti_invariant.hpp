#pragma once

// The operator P(ψ) = (dδψ)'' on J-anti-invariant 2-forms and the
// dimension h⁻ of its kernel, which is the space of closed anti-invariant forms.

#include <functional>
#include <string>
#include <vector>

#include "acslab/grid.hpp"
#include "acslab/torus_calculus.hpp"

namespace acslab {

struct SpectralReport {
  std::vector<double> eigenvalues;
  int kernel_dim = 0;
  double gap_ratio = 0.0;
  double tolerance = 0.0;
  int resolution = 0;
  int iterations = 0;
  /// L²-orthonormal kernel forms.
  std::vector<FormField> kernel;
};

struct HMinusOptions {
  int block = 10;
  int wanted = 4;
  /// Weight on the J-invariant part; 0 selects (2π / min period)².
  double penalty = 0.0;
  double residual_tolerance = 1e-8;
  int max_iterations = 400;
  double relative_threshold = 1e-6;
  double min_gap_ratio = 1e3;
  bool throw_on_gap = true;
  unsigned seed = 20240611;
};

FormField invariant_part(const FormField& alpha, const ACSField& j);
FormField anti_invariant_part(const FormField& alpha, const ACSField& j);

/// (dδψ)''. Throws InputNotAntiInvariant.
FormField lejmi_P(const FormField& psi, const MetricField& g, const ACSField& j);
/// ½Δψ − ¼⟨Δψ,ω⟩ω.
FormField lejmi_P_laplacian(const FormField& psi, const MetricField& g, const ACSField& j);

/// Smallest eigenvalues of P and the kernel count. Eigenvalues come from
/// the energy ‖dx‖² + ‖δx‖² + κ‖x'‖² on all band-limited 2-forms, halved;
/// on anti-invariant forms it equals 2⟨Px,x⟩, so the kernel is exactly 𝒵⁻.
/// Throws IncompatiblePair, GapUndetected, SolverDivergence.
SpectralReport h_minus(const MetricField& g, const ACSField& j, const HMinusOptions& options = {});

/// 3 − rank of ψ ↦ ⟨ψ,ω⟩ on the g-self-dual harmonic forms.
int h_minus_rank_test(const MetricField& g, const ACSField& j, double tol = 1e-8);
int h_minus_rank_test(const MetricField& g, const ACSField& j, const std::vector<FormField>& sd_basis,
                      double tol = 1e-8);

int h_plus(const MetricField& g, const ACSField& j, const HMinusOptions& options = {});

struct TameVerdict {
  int difference = 0;
  bool met = false;
  bool heuristic = false;
  std::string label() const;
};

TameVerdict tame_verdict(int b_plus, int h_minus_value, bool heuristic);
TameVerdict tame_indicator(const MetricField& g, const ACSField& j, const HMinusOptions& options = {});

struct PathSample {
  double t = 0.0;
  int kernel_dim = 0;
  double gap_ratio = 0.0;
  /// Both neighbours have strictly larger h⁻: an isolated dip, which upper
  /// semi-continuity rules out as the sampling is refined.
  bool flagged = false;
};

using ACSPath = std::function<ACSField(double)>;
using MetricRule = std::function<MetricField(const ACSField&)>;

std::vector<PathSample> path_scan(const std::vector<double>& samples, const ACSPath& path,
                                  const MetricRule& metric, const HMinusOptions& options = {});

}  // namespace acslab
