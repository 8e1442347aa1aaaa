#include "acslab/lie_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "acslab/errors.hpp"
#include "acslab/hermitian.hpp"

namespace acslab {
namespace {

constexpr std::array<std::array<int, 2>, 6> kPairs{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

int pair_position(int i, int j) {
  for (int k = 0; k < 6; ++k) {
    if (kPairs[k][0] == i && kPairs[k][1] == j) return k;
  }
  return -1;
}

Eigen::MatrixXd orthonormal_columns(const Eigen::MatrixXd& m, int rank) {
  if (rank == 0 || m.cols() == 0) return Eigen::MatrixXd(m.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(rank);
}

Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& m, int rank) {
  const Eigen::Index n = m.cols();
  if (m.rows() == 0) return Eigen::MatrixXd::Identity(n, n);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  return svd.matrixV().rightCols(n - rank);
}

Eigen::Vector4d bracket_vectors(const LieAlgebraModel& model, const Eigen::Vector4d& x,
                                const Eigen::Vector4d& y) {
  Eigen::Vector4d out = Eigen::Vector4d::Zero();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i != j && x[i] != 0.0 && y[j] != 0.0) out += x[i] * y[j] * model.bracket(i, j);
    }
  }
  return out;
}

}  // namespace

LieAlgebraModel LieAlgebraModel::parse(const std::string& text, const std::string& name) {
  LieAlgebraModel model;
  model.name = name;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  std::array<bool, 4> seen{};
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::string s;
    for (char c : line) {
      if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    }
    if (s.empty()) continue;
    auto fail = [&](const std::string& what) {
      throw Error(ErrorKind::ParseError, "model line " + std::to_string(line_no) + ": " + what);
    };
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq != 3 || s[0] != 'd' || s[1] != 'e' || s[2] < '1' || s[2] > '4') {
      fail("expected 'deK = ...'");
    }
    const int k = s[2] - '1';
    if (seen[k]) fail("de" + std::to_string(k + 1) + " given twice");
    seen[k] = true;
    const std::string rhs = s.substr(eq + 1);
    if (rhs == "0") continue;
    std::size_t pos = 0;
    while (pos < rhs.size()) {
      int sign = 1;
      if (rhs[pos] == '+' || rhs[pos] == '-') {
        sign = rhs[pos] == '-' ? -1 : 1;
        ++pos;
      } else if (pos != 0) {
        fail("expected '+' or '-'");
      }
      const std::size_t start = pos;
      while (pos < rhs.size() && (std::isdigit(static_cast<unsigned char>(rhs[pos])) || rhs[pos] == '/')) ++pos;
      Rational coef = start == pos ? Rational(1) : Rational::parse(rhs.substr(start, pos - start));
      if (pos < rhs.size() && rhs[pos] == '*') ++pos;
      if (pos + 3 > rhs.size() || rhs[pos] != 'e') fail("expected a term eIJ");
      const int a = rhs[pos + 1] - '1';
      const int b = rhs[pos + 2] - '1';
      if (a < 0 || a > 3 || b < 0 || b > 3 || a == b) fail("bad basis 2-form in '" + rhs + "'");
      pos += 3;
      if (a > b) sign = -sign;
      const int m = pair_position(std::min(a, b), std::max(a, b));
      model.de[k][m] = model.de[k][m] + (sign < 0 ? -coef : coef);
    }
  }
  model.validate();
  return model;
}

std::string LieAlgebraModel::to_text() const {
  std::ostringstream out;
  for (int k = 0; k < 4; ++k) {
    out << "de" << k + 1 << " =";
    bool any = false;
    for (int m = 0; m < 6; ++m) {
      const Rational& c = de[k][m];
      if (c.is_zero()) continue;
      const bool negative = c.num() < 0;
      const Rational mag = negative ? -c : c;
      out << (negative ? " - " : (any ? " + " : " "));
      if (!(mag == Rational(1))) out << mag.str() << ' ';
      out << 'e' << kPairs[m][0] + 1 << kPairs[m][1] + 1;
      any = true;
    }
    if (!any) out << " 0";
    out << '\n';
  }
  return out.str();
}

void LieAlgebraModel::validate() const {
  if (!satisfies_jacobi(*this)) {
    throw Error(ErrorKind::JacobiViolation, "structure constants violate the Jacobi identity (d² ≠ 0)");
  }
  if (!is_nilpotent(*this)) throw Error(ErrorKind::NotNilpotent, "lower central series does not terminate");
}

Eigen::Vector4d LieAlgebraModel::bracket(int i, int j) const {
  Eigen::Vector4d out = Eigen::Vector4d::Zero();
  if (i == j) return out;
  const int sign = i < j ? 1 : -1;
  const int m = pair_position(std::min(i, j), std::max(i, j));
  for (int k = 0; k < 4; ++k) out[k] = -sign * de[k][m].to_double();
  return out;
}

forms::Coeffs LieAlgebraModel::de_coeffs(int k) const {
  forms::Coeffs c(6);
  for (int m = 0; m < 6; ++m) c[m] = de[k][m].to_double();
  return c;
}

Eigen::MatrixXd ce_d_matrix(const LieAlgebraModel& model, int p) {
  if (p < 0 || p > 3) throw Error(ErrorKind::DegreeOverflow, "ce_d degree out of range");
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(forms::dimension(p + 1), forms::dimension(p));
  for (int col = 0; col < forms::dimension(p); ++col) {
    const auto idx = forms::indices(p, col);
    for (int m = 0; m < p; ++m) {
      forms::Coeffs left = forms::Coeffs::Ones(1);
      int left_deg = 0;
      for (int a = 0; a < m; ++a) {
        forms::Coeffs e = forms::Coeffs::Zero(4);
        e[idx[a]] = 1.0;
        left = forms::wedge(left_deg, left, 1, e);
        ++left_deg;
      }
      forms::Coeffs term = forms::wedge(left_deg, left, 2, model.de_coeffs(idx[m]));
      int deg = left_deg + 2;
      for (int a = m + 1; a < p; ++a) {
        forms::Coeffs e = forms::Coeffs::Zero(4);
        e[idx[a]] = 1.0;
        term = forms::wedge(deg, term, 1, e);
        ++deg;
      }
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      d.col(col) += sign * term;
    }
  }
  return d;
}

InvariantForm ce_d(const LieAlgebraModel& model, const InvariantForm& form) {
  return {form.degree + 1, ce_d_matrix(model, form.degree) * form.coeffs};
}

bool satisfies_jacobi(const LieAlgebraModel& model) {
  for (int p = 0; p < 3; ++p) {
    const Eigen::MatrixXd dd = ce_d_matrix(model, p + 1) * ce_d_matrix(model, p);
    if (dd.cwiseAbs().maxCoeff() > 1e-12) return false;
  }
  return true;
}

bool is_nilpotent(const LieAlgebraModel& model) {
  Eigen::MatrixXd span = Eigen::Matrix4d::Identity();
  for (int step = 0; step < 5; ++step) {
    if (span.cols() == 0) return true;
    Eigen::MatrixXd next(4, 4 * span.cols());
    for (Eigen::Index c = 0; c < span.cols(); ++c) {
      for (int i = 0; i < 4; ++i) {
        next.col(c * 4 + i) = bracket_vectors(model, Eigen::Vector4d::Unit(i), span.col(c));
      }
    }
    const int r = matrix_rank(next, 1e-12);
    span = orthonormal_columns(next, r);
  }
  return span.cols() == 0;
}

InvariantCohomology invariant_cohomology(const LieAlgebraModel& model, int p) {
  InvariantCohomology out;
  const int n = forms::dimension(p);
  bool exact_k = true;
  bool exact_i = true;
  Eigen::MatrixXd dp = p < 4 ? ce_d_matrix(model, p) : Eigen::MatrixXd(0, n);
  Eigen::MatrixXd dm = p > 0 ? ce_d_matrix(model, p - 1) : Eigen::MatrixXd(n, 0);
  const int rank_p = dp.rows() > 0 ? matrix_rank(dp, 1e-12, &exact_k) : 0;
  const int rank_m = dm.cols() > 0 ? matrix_rank(dm, 1e-12, &exact_i) : 0;
  out.exact_arithmetic = exact_k && exact_i;
  out.betti = (n - rank_p) - rank_m;
  const Eigen::MatrixXd ker = kernel_basis(dp, rank_p);
  const Eigen::MatrixXd im = orthonormal_columns(dm, rank_m);
  Eigen::MatrixXd q = ker - im * (im.transpose() * ker);
  const Eigen::MatrixXd reps = orthonormal_columns(q, out.betti);
  for (Eigen::Index c = 0; c < reps.cols(); ++c) out.representatives.push_back(reps.col(c));
  return out;
}

InvariantHpm invariant_h_pm(const LieAlgebraModel& model, const ACSValue& j, const MetricValue& g) {
  if (compatibility_residual(g, j) > 1e-10) {
    throw Error(ErrorKind::IncompatiblePair, "invariant metric and structure are not compatible");
  }
  InvariantHpm out;
  const auto basis = split_basis(g, j);
  Eigen::MatrixXd b(6, 2);
  b.col(0) = basis.minus_basis[0].coeffs();
  b.col(1) = basis.minus_basis[1].coeffs();
  const Eigen::MatrixXd d2 = ce_d_matrix(model, 2);
  out.h_minus = 2 - matrix_rank(d2 * b, 1e-10);

  const int rank_d2 = matrix_rank(d2, 1e-10);
  const Eigen::MatrixXd ker = kernel_basis(d2, rank_d2);
  Eigen::MatrixXd joint(6, ker.cols() + 2);
  joint << ker, b;
  out.h_minus_alt = static_cast<int>(ker.cols()) + 2 - matrix_rank(joint, 1e-10);

  const auto h2 = invariant_cohomology(model, 2);
  const int b2 = h2.betti;
  Eigen::MatrixXd q(b2, b2);
  for (int a = 0; a < b2; ++a) {
    for (int c = 0; c < b2; ++c) q(a, c) = forms::wedge(2, h2.representatives[a], 2, h2.representatives[c])[0];
  }
  if (b2 > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q);
    for (int a = 0; a < b2; ++a) {
      if (es.eigenvalues()[a] > 1e-10) ++out.b_plus;
      if (es.eigenvalues()[a] < -1e-10) ++out.b_minus;
    }
  }
  out.h_plus = b2 - out.h_minus;
  return out;
}

KodairaFamilyResult kodaira_family_h(const LieAlgebraModel& model, double f, double l, double s) {
  const double norm = 2.0 * f * f + 2.0 * (l * l + s * s);
  if (std::abs(norm - 2.0) > 1e-10) {
    std::ostringstream msg;
    msg << "2f² + |β|²(l² + s²) = " << norm << ", expected 2";
    throw Error(ErrorKind::NormViolation, msg.str());
  }
  KodairaFamilyResult out;
  out.predicted = 2 - ((l != 0.0 || s != 0.0) ? 1 : 0);
  const ACSValue jstd = ACSValue::standard();
  const MetricValue g = MetricValue::euclidean();
  const TwoFormValue beta = basis_form(0, 2) - basis_form(1, 3);
  const TwoFormValue tilde = f * fundamental_form(g, jstd) + l * beta + s * j_act(beta, jstd);
  out.measured = invariant_h_pm(model, acs_from_form(g, tilde, 1e-9), g).h_minus;
  return out;
}

NijenhuisData nijenhuis_invariant(const LieAlgebraModel& model, const ACSValue& j) {
  NijenhuisData out;
  Eigen::MatrixXd all(4, 16);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const Eigen::Vector4d x = Eigen::Vector4d::Unit(a);
      const Eigen::Vector4d y = Eigen::Vector4d::Unit(b);
      const Eigen::Vector4d jx = j.j * x;
      const Eigen::Vector4d jy = j.j * y;
      const Eigen::Vector4d n = bracket_vectors(model, jx, jy) - j.j * bracket_vectors(model, jx, y) -
                                j.j * bracket_vectors(model, x, jy) - bracket_vectors(model, x, y);
      out.tensor[a][b] = kNijenhuisScale * n;
      all.col(a * 4 + b) = out.tensor[a][b];
    }
  }
  const int r = all.cwiseAbs().maxCoeff() > 0.0 ? matrix_rank(all, 1e-10) : 0;
  const Eigen::MatrixXd basis = orthonormal_columns(all, r);
  for (Eigen::Index c = 0; c < basis.cols(); ++c) out.image_basis.push_back(basis.col(c));
  return out;
}

std::array<Eigen::Matrix4d, 4> invariant_levi_civita(const LieAlgebraModel& model, const MetricValue& g) {
  auto c = [&](int a, int b, int l) { return model.bracket(a, b).dot(g.g.col(l)); };
  const Eigen::Matrix4d g_inv = g.inverse();
  std::array<Eigen::Matrix4d, 4> gamma;
  for (int i = 0; i < 4; ++i) {
    for (int jj = 0; jj < 4; ++jj) {
      Eigen::Vector4d lowered;
      for (int l = 0; l < 4; ++l) lowered[l] = 0.5 * (c(i, jj, l) - c(jj, l, i) + c(l, i, jj));
      gamma[i].col(jj) = g_inv * lowered;
    }
  }
  return gamma;
}

Eigen::Vector4d invariant_lee_form(const LieAlgebraModel& model, const ACSValue& j, const MetricValue& g) {
  const TwoFormValue omega = fundamental_form(g, j);
  return lee_at(ce_d_matrix(model, 2) * omega.coeffs(), omega);
}

PointGeometry invariant_point_geometry(const LieAlgebraModel& model, const ACSValue& j, const MetricValue& g) {
  PointGeometry p;
  p.g = g.g;
  p.j = j.j;
  p.gamma = invariant_levi_civita(model, g);
  p.nijenhuis = nijenhuis_invariant(model, j).tensor;
  const auto basis = split_basis(g, j);
  p.omega.value = basis.omega;
  p.phi.value = basis.minus_basis[0];
  p.jphi.value = basis.minus_basis[1];
  p.domega = ce_d_matrix(model, 2) * basis.omega.coeffs();
  return p;
}

WellBalancedResiduals invariant_well_balanced(const LieAlgebraModel& model, const ACSValue& j,
                                              const MetricValue& g) {
  return well_balanced_at(invariant_point_geometry(model, j, g));
}

Preset preset(const std::string& name) {
  Preset out;
  out.j = ACSValue::standard();
  out.g = MetricValue::euclidean();
  out.omega = fundamental_form(out.g, out.j);
  if (name == "abelian") {
    out.model = LieAlgebraModel::parse("de1 = 0\nde2 = 0\nde3 = 0\nde4 = 0\n", name);
  } else if (name == "kodaira") {
    out.model = LieAlgebraModel::parse("de1 = 0\nde2 = 0\nde3 = 0\nde4 = e12\n", name);
  } else if (name == "three-step") {
    out.model = LieAlgebraModel::parse("de1 = 0\nde2 = 0\nde3 = e14\nde4 = e12\n", name);
  } else {
    throw Error(ErrorKind::UnknownPreset, "unknown preset \"" + name + "\"");
  }
  return out;
}

}  // namespace acslab
