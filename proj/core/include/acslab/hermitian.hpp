#pragma once

// Almost Hermitian diagnostics: Lee form, Gauduchon gauge, Nijenhuis tensor,
// the well-balanced conditions, Levi-Civita connection and curvature.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "acslab/grid.hpp"
#include "acslab/torus_calculus.hpp"

namespace acslab {

/// Scale c in N(X,Y) = c([JX,JY] − J[JX,Y] − J[X,JY] − [X,Y]), fixed so that
/// (∇_X ω)(Y,Z) = 2⟨N(Y,Z), JX⟩ + ½(dω(X,Y,Z) − dω(X,JY,JZ)).
extern const double kNijenhuisScale;
/// Scale of the Weyl term in ∫(|dψ|²+|δψ|²−|∇ψ|²) = ∫(s/3 |ψ|² − c⟨W(ψ),ψ⟩)
/// when W acts on Λ² with orthonormal e^a∧e^b.
extern const double kWeylScale;

using NijenhuisTensor = std::array<std::array<Eigen::Vector4d, 4>, 4>;
using Connection = std::array<Eigen::Matrix4d, 4>;

struct FormJet {
  TwoFormValue value;
  std::array<TwoFormValue, 4> partial;
};

/// (∇_i α)_{jk} = ∂_i α_{jk} − Γ^m_{ij} α_{mk} − Γ^m_{ik} α_{jm}, with gamma[i](m,j) = Γ^m_{ij}.
TwoFormValue covariant_derivative(const FormJet& alpha, const Connection& gamma, int i);

/// θ with dω = θ∧ω at one point.
Eigen::Vector4d lee_at(const forms::Coeffs& domega, const TwoFormValue& omega);

struct WellBalancedResiduals {
  double res_iii = 0.0;
  double res_iv = 0.0;
  double res_v = 0.0;
};

/// Everything the well-balanced conditions need at one point, in any frame.
struct PointGeometry {
  Eigen::Matrix4d g;
  Eigen::Matrix4d j;
  Connection gamma;
  NijenhuisTensor nijenhuis;
  forms::Coeffs domega;
  FormJet omega;
  FormJet phi;
  FormJet jphi;
};

WellBalancedResiduals well_balanced_at(const PointGeometry& p);
/// Sup over frame triples of the defect in the ∇ω identity above.
double nabla_omega_identity_at(const PointGeometry& p);

FormField lee_form(const MetricField& g, const ACSField& j);
double lee_residual(const MetricField& g, const ACSField& j, const FormField& theta);

/// L² norm of δθ with the Nyquist modes and the mean dropped.
double gauduchon_residual(const MetricField& g, const ACSField& j);

struct GauduchonOptions {
  double tolerance = 1e-10;
  int max_newton = 20;
  int max_krylov = 200;
};

struct GauduchonResult {
  ScalarField u;
  MetricField metric;
  double residual = 0.0;
  int iterations = 0;
  std::vector<double> history;
};

/// g̃ = e^{2u}g with δ_g̃ θ_g̃ = 0 and ∫e^{4u} dV_g = Vol_g. Throws SolverDivergence.
GauduchonResult gauduchon_gauge(const MetricField& g, const ACSField& j, const GauduchonOptions& options = {});

struct ConstancyReport {
  ScalarField trace;
  double mean = 0.0;
  double deviation = 0.0;
  /// False when g is not Gauduchon, so the constancy statement does not apply.
  bool hypothesis_holds = true;
};

ConstancyReport constancy_check(const FormField& psi, const MetricField& g, const ACSField& j);

struct NijenhuisField {
  std::vector<NijenhuisTensor> tensor;
  std::vector<int> rank;
  int max_rank = 0;
  double sup = 0.0;
  /// Sup of the distance of J·Im(N) from Im(N).
  double invariance_defect = 0.0;
};

/// Pointwise ranks count singular values above rank_tolerance·max(1, sup); the
/// spectral derivatives of a non-band-limited J carry errors of that order.
NijenhuisField nijenhuis_field(const ACSField& j, double rank_tolerance = 1e-2);
double nijenhuis_sup(const ACSField& j);
int image_rank(const NijenhuisTensor& n, double tol = 1e-8);

bool signature_constraint(int chi, int sigma);

struct ConnectionField {
  std::vector<Connection> gamma;
  double compatibility_residual = 0.0;
  double symmetry_residual = 0.0;
};

ConnectionField levi_civita(const MetricField& g);

struct CurvatureData {
  /// Curvature operator on Λ² in the orthonormal basis e^a∧e^b (a<b) of
  /// frame[x], normalized so that diagonal entries are sectional curvatures.
  std::vector<Eigen::Matrix<double, 6, 6>> operator_on_forms;
  std::vector<Eigen::Matrix4d> ricci;
  ScalarField scalar;
  std::vector<Eigen::Matrix3d> w_plus;
  std::vector<Eigen::Matrix3d> w_minus;
  /// Orthonormal frames (columns) with positive orientation.
  std::vector<Eigen::Matrix4d> frame;
  double bianchi_residual = 0.0;
};

CurvatureData curvature(const ConnectionField& conn, const MetricField& g);

/// W acting on a coordinate 2-form at grid point x, returned in coordinates.
TwoFormValue weyl_apply(const CurvatureData& curv, const MetricField& g, std::size_t x,
                        const TwoFormValue& beta, bool self_dual_only);

struct WellBalancedOptions {
  /// Optional gauge rotation φ ↦ cos t φ + sin t Jφ.
  std::optional<ScalarField> rotation;
};

/// Throws FrameDegenerate.
WellBalancedResiduals well_balanced_residuals(const MetricField& g, const ACSField& j,
                                              const WellBalancedOptions& options = {});

double hermitian_weyl_residual(const MetricField& g, const ACSField& j, const CurvatureData& curv);

struct WeitzenbockReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double relative_residual = 0.0;
};

WeitzenbockReport weitzenbock_residual(const FormField& psi, const MetricField& g, const CurvatureData& curv);

}  // namespace acslab
