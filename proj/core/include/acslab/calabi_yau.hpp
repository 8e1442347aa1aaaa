#pragma once

// Compatible symplectic forms with prescribed volume on the flat torus:
// ω = (1+c)ω̃ + Σ sᵢχᵢ + db with d*b = 0, J-invariant, and ω² = e^F ω̃².

#include <string>
#include <vector>

#include "acslab/anti_invariant.hpp"
#include "acslab/grid.hpp"
#include "acslab/torus_calculus.hpp"

namespace acslab {

struct TypeDProblem {
  ACSField j;
  /// Reference symplectic form, compatible with reference_j and g_ref.
  FormField omega_ref;
  ACSField reference_j;
  MetricField g_ref;
  /// Normalized so that ∫e^F ω̃² = ∫ω̃².
  ScalarField F;
  /// Harmonic g_ref-self-dual forms, L²-orthonormal and orthogonal to ω̃.
  std::vector<FormField> chi;
};

/// Builds the problem for a constant reference pair (g̃, J̃) and a constant
/// J̃-invariant positive form ω̃. F is shifted by its log-mean.
/// Throws UnsupportedMetric, IncompatiblePair.
TypeDProblem make_type_d_problem(const ACSField& j, const TwoFormValue& omega_ref, const ACSValue& reference_j,
                                 const ScalarField& F);

struct CYSolution {
  FormField b;
  std::vector<double> s;
  /// Coefficient c of ω̃ in the class shift.
  double scale = 0.0;
  FormField omega;
  std::vector<double> residual_history;
  int iterations = 0;
  double compatibility_defect = 0.0;
  double volume_defect = 0.0;
  double closedness_defect = 0.0;
  double taming_margin = 0.0;
  double gauge_defect = 0.0;
};

struct CYOptions {
  double tolerance = 1e-10;
  int max_newton = 30;
  int max_krylov = 200;
  double krylov_tolerance = 1e-11;
  /// A stalled iteration is still a success below this residual.
  double accept_tolerance = 1e-8;
};

/// Π(α)_{kl} = ½(α_{kl} − J^i_k J^j_l α_{ij}).
FormField pi_tensor(const ACSField& j, const FormField& alpha);

/// Φ(b,s) = log(ω²/(e^F ω̃²)) · (Id−Π)ω̃/2 + Π(ω) for ω = (1+scale)ω̃ + Σsχ + db.
/// Throws DegenerateCandidate.
FormField phi_residual(const FormField& b, const std::vector<double>& s, const TypeDProblem& problem,
                       double scale = 0.0);

/// a ⟂ harmonic 1-forms with d*a = rhs0 and d⁺a = rhs2 for a constant metric.
/// Throws RhsNotInRange, UnsupportedMetric.
FormField linearized_solve(const ScalarField& rhs0, const FormField& rhs2, const MetricField& g,
                           double tol = 1e-10);

/// Damped Newton on Φ = 0 with GMRES steps preconditioned by L⁻¹.
/// Throws TamingLost, NewtonDivergence.
CYSolution solve_type_D(const TypeDProblem& problem, const CYOptions& options = {});
CYSolution solve_type_D(const TypeDProblem& problem, const FormField& b0, const std::vector<double>& s0,
                        const CYOptions& options = {});

/// Smallest eigenvalue over the grid of the symmetric part of ω(·,J·).
double taming_margin(const FormField& omega, const ACSField& j);

struct RayOutcome {
  bool solved = false;
  std::string error;
  int iterations = 0;
  double residual = 0.0;
  /// Cohomology class of the solution (mean of ω).
  TwoFormValue cohomology_class;
};

struct SemicontinuitySample {
  double t = 0.0;
  int h_minus = 0;
  int h_plus = 0;
  std::vector<RayOutcome> rays;
  /// Rank of the solved classes.
  int class_rank = 0;
  bool all_solved = false;
  bool inequalities_hold = false;
};

struct SemicontinuityReport {
  int base_h_minus = 0;
  int base_h_plus = 0;
  std::vector<SemicontinuitySample> samples;
};

/// Solves type D along a path starting at a constant Kähler structure, one
/// solve per ray class ω̃ₖ, and records h^± of each sample.
SemicontinuityReport semicontinuity_experiment(const std::vector<double>& samples, const ACSPath& path,
                                               const ACSValue& base_j, const std::vector<TwoFormValue>& ray_forms,
                                               const CYOptions& cy_options = {},
                                               const HMinusOptions& h_options = {});

/// ω_J and ω_J + t·σ for the three anti-self-dual flat forms σ.
std::vector<TwoFormValue> kahler_rays(const ACSValue& j, double t = 0.5);

}  // namespace acslab
