#pragma once

// Left-invariant forms on 4-dimensional nilpotent Lie algebras, given by the
// differentials de^k of a coframe. Structure constants follow
// de^k(X,Y) = −e^k([X,Y]), so [e_i,e_j] = −Σ_k (de^k)_{ij} e_k.

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "acslab/forms.hpp"
#include "acslab/hermitian.hpp"
#include "acslab/pointwise.hpp"
#include "acslab/rational.hpp"

namespace acslab {

struct LieAlgebraModel {
  std::string name;
  /// de[k][m] is the coefficient of the m-th basis 2-form in de^{k+1}.
  std::array<std::array<Rational, 6>, 4> de{};

  /// Lines "deK = <terms>" with terms like "-1/2 e23"; '#' starts a comment.
  /// Throws ParseError, JacobiViolation, NotNilpotent.
  static LieAlgebraModel parse(const std::string& text, const std::string& name = "model");
  std::string to_text() const;

  /// Throws JacobiViolation or NotNilpotent.
  void validate() const;
  Eigen::Vector4d bracket(int i, int j) const;
  forms::Coeffs de_coeffs(int k) const;
};

struct InvariantForm {
  int degree = 0;
  forms::Coeffs coeffs;
};

/// Matrix of ce_d from degree p to p+1 in the lexicographic bases.
Eigen::MatrixXd ce_d_matrix(const LieAlgebraModel& model, int p);
InvariantForm ce_d(const LieAlgebraModel& model, const InvariantForm& form);

bool satisfies_jacobi(const LieAlgebraModel& model);
bool is_nilpotent(const LieAlgebraModel& model);

struct InvariantCohomology {
  int betti = 0;
  std::vector<forms::Coeffs> representatives;
  bool exact_arithmetic = false;
};

InvariantCohomology invariant_cohomology(const LieAlgebraModel& model, int p);

struct InvariantHpm {
  int h_minus = 0;
  int h_plus = 0;
  int b_plus = 0;
  int b_minus = 0;
  /// h⁻ from dim(ker d ∩ Λ⁻) = dim ker d + 2 − dim(ker d + Λ⁻).
  int h_minus_alt = 0;
};

/// Throws IncompatiblePair.
InvariantHpm invariant_h_pm(const LieAlgebraModel& model, const ACSValue& j, const MetricValue& g);

struct KodairaFamilyResult {
  int predicted = 0;
  int measured = 0;
};

/// J_{f,l,s} from fω + lβ + sJβ with constants. Throws NormViolation.
KodairaFamilyResult kodaira_family_h(const LieAlgebraModel& model, double f, double l, double s);

struct NijenhuisData {
  /// tensor[i][j] = N(e_i, e_j).
  std::array<std::array<Eigen::Vector4d, 4>, 4> tensor;
  std::vector<Eigen::Vector4d> image_basis;
};

NijenhuisData nijenhuis_invariant(const LieAlgebraModel& model, const ACSValue& j);

/// Connection coefficients of the left-invariant metric in the frame:
/// gamma[i](k,j) = e^k(∇_{e_i} e_j).
std::array<Eigen::Matrix4d, 4> invariant_levi_civita(const LieAlgebraModel& model, const MetricValue& g);

/// θ with dω = θ∧ω, as coefficients of e^1..e^4.
Eigen::Vector4d invariant_lee_form(const LieAlgebraModel& model, const ACSValue& j, const MetricValue& g);

/// Pointwise data in the coframe e^1..e^4, with vanishing frame derivatives.
PointGeometry invariant_point_geometry(const LieAlgebraModel& model, const ACSValue& j, const MetricValue& g);

WellBalancedResiduals invariant_well_balanced(const LieAlgebraModel& model, const ACSValue& j,
                                              const MetricValue& g);

struct Preset {
  LieAlgebraModel model;
  ACSValue j;
  MetricValue g;
  TwoFormValue omega;
};

/// "abelian", "kodaira" or "three-step". Throws UnknownPreset.
Preset preset(const std::string& name);

}  // namespace acslab
