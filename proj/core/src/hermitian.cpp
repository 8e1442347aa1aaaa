#include "acslab/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "acslab/eigensolver.hpp"
#include "acslab/errors.hpp"
#include "acslab/spectral.hpp"

namespace acslab {

const double kNijenhuisScale = 0.25;
const double kWeylScale = 2.0;

namespace {

constexpr std::array<std::array<int, 2>, 6> kPairs{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

double tensor_norm2(const std::array<TwoFormValue, 4>& a, const std::array<TwoFormValue, 4>& b,
                    const MetricValue& g, const Eigen::Matrix4d& g_inv) {
  double out = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int k = 0; k < 4; ++k) {
      if (g_inv(i, k) != 0.0) out += g_inv(i, k) * inner(a[i], b[k], g);
    }
  }
  return out;
}

// Rows map frame 2-form coordinates (e^{ab}, a<b) to (Λ⁺ | Λ⁻) coordinates.
Eigen::Matrix<double, 6, 6> sd_rotation() {
  const double h = 1.0 / std::sqrt(2.0);
  Eigen::Matrix<double, 6, 6> p = Eigen::Matrix<double, 6, 6>::Zero();
  // Λ⁺: e12+e34, e13−e24, e14+e23; Λ⁻: e12−e34, e13+e24, e14−e23.
  p(0, 0) = h, p(0, 5) = h;
  p(1, 1) = h, p(1, 4) = -h;
  p(2, 2) = h, p(2, 3) = h;
  p(3, 0) = h, p(3, 5) = -h;
  p(4, 1) = h, p(4, 4) = h;
  p(5, 2) = h, p(5, 3) = -h;
  return p;
}

std::array<TwoFormValue, 4> partials(const Spectral& sp, const FormField& f, std::size_t x,
                                     const std::array<FormField, 4>& d) {
  (void)sp;
  (void)f;
  std::array<TwoFormValue, 4> out;
  for (int i = 0; i < 4; ++i) out[i] = d[i].two_form_at(x);
  return out;
}

std::array<FormField, 4> gradient_fields(const Spectral& sp, const FormField& f) {
  std::array<FormField, 4> out;
  for (int i = 0; i < 4; ++i) out[i] = FormField::zero(f.chart, f.degree);
  for (std::size_t k = 0; k < f.components.size(); ++k) {
    const auto grad = sp.gradient(f.components[k]);
    for (int i = 0; i < 4; ++i) out[i].components[k] = grad[i];
  }
  return out;
}

}  // namespace

TwoFormValue covariant_derivative(const FormJet& alpha, const Connection& gamma, int i) {
  const Eigen::Matrix4d a = alpha.value.matrix();
  const Eigen::Matrix4d out = alpha.partial[i].matrix() - gamma[i].transpose() * a - a * gamma[i];
  return TwoFormValue::from_matrix(out);
}

Eigen::Vector4d lee_at(const forms::Coeffs& domega, const TwoFormValue& omega) {
  Eigen::Matrix4d m;
  for (int i = 0; i < 4; ++i) {
    forms::Coeffs e = forms::Coeffs::Zero(4);
    e[i] = 1.0;
    m.col(i) = forms::wedge(1, e, 2, omega.coeffs());
  }
  return m.colPivHouseholderQr().solve(Eigen::Vector4d(domega));
}

WellBalancedResiduals well_balanced_at(const PointGeometry& p) {
  const MetricValue g{p.g};
  const Eigen::Matrix4d g_inv = p.g.inverse();
  const ACSValue j{p.j};
  WellBalancedResiduals out;

  for (const auto& [a, b] : kPairs) {
    const forms::Coeffs contracted = forms::interior(3, p.nijenhuis[a][b], p.domega);
    const auto anti = split_j(TwoFormValue::from_coeffs(contracted), j).second;
    out.res_iii = std::max(out.res_iii, anti.max_abs());
  }

  std::array<TwoFormValue, 4> nabla_omega;
  std::array<TwoFormValue, 4> nabla_phi;
  std::array<TwoFormValue, 4> nabla_jphi;
  for (int i = 0; i < 4; ++i) {
    nabla_omega[i] = covariant_derivative(p.omega, p.gamma, i);
    nabla_phi[i] = covariant_derivative(p.phi, p.gamma, i);
    nabla_jphi[i] = covariant_derivative(p.jphi, p.gamma, i);
  }
  const double n_phi = tensor_norm2(nabla_phi, nabla_phi, g, g_inv);
  const double n_jphi = tensor_norm2(nabla_jphi, nabla_jphi, g, g_inv);
  const double cross = tensor_norm2(nabla_phi, nabla_jphi, g, g_inv);
  out.res_iv = std::max(std::abs(n_phi - n_jphi), std::abs(cross));

  Eigen::Vector4d a_form;
  Eigen::Vector4d b_form;
  for (int i = 0; i < 4; ++i) {
    a_form[i] = 0.5 * inner(nabla_omega[i], p.phi.value, g);
    b_form[i] = 0.5 * inner(nabla_omega[i], p.jphi.value, g);
  }
  const double aa = a_form.dot(g_inv * a_form);
  const double bb = b_form.dot(g_inv * b_form);
  const double ab = a_form.dot(g_inv * b_form);
  out.res_v = std::max(std::abs(aa - bb), std::abs(ab));
  return out;
}

double nabla_omega_identity_at(const PointGeometry& p) {
  double worst = 0.0;
  for (int a = 0; a < 4; ++a) {
    const Eigen::Matrix4d lhs = covariant_derivative(p.omega, p.gamma, a).matrix();
    const Eigen::Vector4d x = Eigen::Vector4d::Unit(a);
    const Eigen::Vector4d jx = p.j * x;
    for (int b = 0; b < 4; ++b) {
      for (int c = 0; c < 4; ++c) {
        const Eigen::Vector4d y = Eigen::Vector4d::Unit(b);
        const Eigen::Vector4d z = Eigen::Vector4d::Unit(c);
        const double rhs = 2.0 * p.nijenhuis[b][c].dot(p.g * jx) +
                           0.5 * (forms::evaluate3(p.domega, x, y, z) -
                                  forms::evaluate3(p.domega, x, p.j * y, p.j * z));
        worst = std::max(worst, std::abs(lhs(b, c) - rhs));
      }
    }
  }
  return worst;
}

FormField lee_form(const MetricField& g, const ACSField& j) {
  const FormField omega = fundamental_form(g, j, 1e-9);
  const FormField domega = ext_d(omega);
  FormField theta = FormField::zero(g.chart, 1);
  for (std::size_t x = 0; x < g.chart.points(); ++x) {
    theta.set(x, lee_at(domega.at(x), omega.two_form_at(x)));
  }
  return theta;
}

double lee_residual(const MetricField& g, const ACSField& j, const FormField& theta) {
  const FormField omega = fundamental_form(g, j, 1e-9);
  return (ext_d(omega) - wedge(theta, omega)).max_abs();
}

namespace {

// δθ without Nyquist modes and without its dV_g mean, both of which are aliasing.
ScalarField band_limited_codiff(const FormField& theta, const MetricField& g) {
  ScalarField r = filter(codiff(theta, g)).component(0);
  const double volume = integrate(ScalarField::constant(g.chart, 1.0), g);
  r.values.array() -= integrate(r, g) / volume;
  return r;
}

}  // namespace

double gauduchon_residual(const MetricField& g, const ACSField& j) {
  return l2_norm(FormField::from_scalar(band_limited_codiff(lee_form(g, j), g)), g);
}

GauduchonResult gauduchon_gauge(const MetricField& g, const ACSField& j, const GauduchonOptions& options) {
  const GridChart& chart = g.chart;
  const auto sp = Spectral::get(chart);
  const double volume = integrate(ScalarField::constant(chart, 1.0), g);

  GauduchonResult out;
  out.u = ScalarField::constant(chart, 0.0);

  struct State {
    MetricField metric;
    FormField theta;
    ScalarField residual;  // δ_g̃ θ_g̃
    double norm = 0.0;
  };
  auto evaluate = [&](const ScalarField& u) {
    State s;
    s.metric = g.conformal(u);
    s.theta = lee_form(s.metric, j);
    s.residual = band_limited_codiff(s.theta, s.metric);
    s.norm = std::sqrt(integrate(ScalarField{chart, s.residual.values.array().square().matrix()}, s.metric));
    return s;
  };

  State state = evaluate(out.u);
  out.history.push_back(state.norm);
  for (int it = 0; it < options.max_newton && state.norm > options.tolerance; ++it) {
    // F(u) = e^{2u} δ_g̃ θ_g̃; directional derivatives are taken on the discrete map.
    auto scaled = [&](const State& st, const ScalarField& u) {
      Eigen::VectorXd v = st.residual.values;
      v.array() *= (2.0 * u.values.array()).exp();
      return v;
    };
    const Eigen::VectorXd f = scaled(state, out.u);
    const double u_scale = std::max(1.0, out.u.values.cwiseAbs().maxCoeff());
    auto jac = [&](const Eigen::VectorXd& v) {
      const double vmax = v.cwiseAbs().maxCoeff();
      if (vmax == 0.0) return Eigen::VectorXd(Eigen::VectorXd::Zero(v.size()));
      const double eps = 1e-7 * u_scale / vmax;
      ScalarField shifted = out.u;
      shifted.values += eps * v;
      return Eigen::VectorXd((scaled(evaluate(shifted), shifted) - f) / eps);
    };
    auto precond = [&](const Eigen::VectorXd& r) { return Eigen::VectorXd(0.5 * sp->solve_shifted_laplacian(r, 0.0)); };
    const auto step = linalg::gmres(jac, -f, precond, 1e-9, options.max_krylov, 60);
    Eigen::VectorXd v = step.x;
    v.array() -= v.mean();
    double lambda = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 12; ++halving) {
      ScalarField trial = out.u;
      trial.values += lambda * v;
      State next = evaluate(trial);
      if (next.norm < state.norm) {
        out.u = trial;
        state = std::move(next);
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    out.iterations = it + 1;
    out.history.push_back(state.norm);
    if (!accepted) break;
  }

  // Normalize ∫e^{4u} dV_g = Vol_g.
  ScalarField e4u = out.u;
  e4u.values = (4.0 * out.u.values.array()).exp();
  out.u.values.array() -= 0.25 * std::log(integrate(e4u, g) / volume);
  out.metric = g.conformal(out.u);
  out.residual = gauduchon_residual(out.metric, j);
  if (!(out.residual < std::max(options.tolerance, 1e-8))) {
    std::ostringstream msg;
    msg << "Gauduchon gauge stalled at residual " << out.residual << " after " << out.iterations
        << " Newton steps";
    throw Error(ErrorKind::SolverDivergence, msg.str());
  }
  return out;
}

ConstancyReport constancy_check(const FormField& psi, const MetricField& g, const ACSField& j) {
  ConstancyReport out;
  const FormField omega = fundamental_form(g, j, 1e-9);
  out.trace = pointwise_inner(psi, omega, g);
  out.mean = out.trace.values.mean();
  out.deviation = (out.trace.values.array() - out.mean).abs().maxCoeff();
  out.hypothesis_holds = gauduchon_residual(g, j) < 1e-6;
  return out;
}

int image_rank(const NijenhuisTensor& n, double tol) {
  Eigen::Matrix<double, 4, 16> m;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) m.col(a * 4 + b) = n[a][b];
  }
  Eigen::JacobiSVD<Eigen::Matrix<double, 4, 16>> svd(m);
  int r = 0;
  for (int i = 0; i < 4; ++i) {
    if (svd.singularValues()[i] > tol) ++r;
  }
  return r;
}

NijenhuisField nijenhuis_field(const ACSField& j, double rank_tolerance) {
  const GridChart& chart = j.chart;
  const auto sp = Spectral::get(chart);
  const std::size_t npts = chart.points();
  // dj[m][i*4+k] = ∂_m J^i_k.
  std::array<std::array<Eigen::VectorXd, 16>, 4> dj;
  for (int i = 0; i < 4; ++i) {
    for (int k = 0; k < 4; ++k) {
      Eigen::VectorXd comp(static_cast<Eigen::Index>(npts));
      for (std::size_t x = 0; x < npts; ++x) comp[x] = j.j[x](i, k);
      const auto grad = sp->gradient(comp);
      for (int m = 0; m < 4; ++m) dj[m][i * 4 + k] = grad[m];
    }
  }
  NijenhuisField out;
  out.tensor.resize(npts);
  out.rank.resize(npts);
  for (std::size_t x = 0; x < npts; ++x) {
    const Eigen::Matrix4d& jm = j.j[x];
    std::array<Eigen::Matrix4d, 4> d;  // d[m](i,k) = ∂_m J^i_k
    for (int m = 0; m < 4; ++m) {
      for (int i = 0; i < 4; ++i) {
        for (int k = 0; k < 4; ++k) d[m](i, k) = dj[m][i * 4 + k][x];
      }
    }
    NijenhuisTensor& n = out.tensor[x];
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        Eigen::Vector4d v = Eigen::Vector4d::Zero();
        for (int i = 0; i < 4; ++i) {
          double s = 0.0;
          for (int m = 0; m < 4; ++m) {
            s += jm(m, a) * d[m](i, b) - jm(m, b) * d[m](i, a);
            s += jm(i, m) * (d[b](m, a) - d[a](m, b));
          }
          v[i] = kNijenhuisScale * s;
        }
        n[a][b] = v;
        out.sup = std::max(out.sup, v.cwiseAbs().maxCoeff());
      }
    }
  }
  const double tol = rank_tolerance * std::max(1.0, out.sup);
  for (std::size_t x = 0; x < npts; ++x) {
    out.rank[x] = image_rank(out.tensor[x], tol);
    out.max_rank = std::max(out.max_rank, out.rank[x]);
    if (out.rank[x] > 0) {
      Eigen::Matrix<double, 4, 16> m;
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) m.col(a * 4 + b) = out.tensor[x][a][b];
      }
      Eigen::JacobiSVD<Eigen::Matrix<double, 4, 16>> svd(m, Eigen::ComputeFullU);
      const Eigen::MatrixXd u = svd.matrixU().leftCols(out.rank[x]);
      const Eigen::MatrixXd ju = j.j[x] * u;
      out.invariance_defect = std::max(out.invariance_defect, (ju - u * (u.transpose() * ju)).norm());
    }
  }
  return out;
}

double nijenhuis_sup(const ACSField& j) { return nijenhuis_field(j).sup; }

bool signature_constraint(int chi, int sigma) { return 5 * chi + 6 * sigma == 0; }

ConnectionField levi_civita(const MetricField& g) {
  const GridChart& chart = g.chart;
  const std::size_t npts = chart.points();
  ConnectionField out;
  out.gamma.assign(npts, Connection{Eigen::Matrix4d::Zero(), Eigen::Matrix4d::Zero(),
                                    Eigen::Matrix4d::Zero(), Eigen::Matrix4d::Zero()});
  if (g.constant) return out;
  const auto sp = Spectral::get(chart);
  // dg[a](i,j) field = ∂_a g_ij.
  std::array<std::array<Eigen::VectorXd, 16>, 4> dg;
  for (int i = 0; i < 4; ++i) {
    for (int k = i; k < 4; ++k) {
      Eigen::VectorXd comp(static_cast<Eigen::Index>(npts));
      for (std::size_t x = 0; x < npts; ++x) comp[x] = g.g[x](i, k);
      const auto grad = sp->gradient(comp);
      for (int a = 0; a < 4; ++a) {
        dg[a][i * 4 + k] = grad[a];
        dg[a][k * 4 + i] = grad[a];
      }
    }
  }
  for (std::size_t x = 0; x < npts; ++x) {
    std::array<Eigen::Matrix4d, 4> d;
    for (int a = 0; a < 4; ++a) {
      for (int i = 0; i < 16; ++i) d[a](i / 4, i % 4) = dg[a][i][x];
    }
    for (int i = 0; i < 4; ++i) {
      for (int jj = 0; jj < 4; ++jj) {
        Eigen::Vector4d lowered;
        for (int l = 0; l < 4; ++l) lowered[l] = 0.5 * (d[i](jj, l) + d[jj](i, l) - d[l](i, jj));
        out.gamma[x][i].col(jj) = g.g_inv[x] * lowered;
      }
    }
    for (int i = 0; i < 4; ++i) {
      const Eigen::Matrix4d nabla = d[i] - out.gamma[x][i].transpose() * g.g[x] - g.g[x] * out.gamma[x][i];
      out.compatibility_residual = std::max(out.compatibility_residual, nabla.cwiseAbs().maxCoeff());
      for (int jj = 0; jj < 4; ++jj) {
        out.symmetry_residual = std::max(
            out.symmetry_residual, (out.gamma[x][i].col(jj) - out.gamma[x][jj].col(i)).cwiseAbs().maxCoeff());
      }
    }
  }
  return out;
}

CurvatureData curvature(const ConnectionField& conn, const MetricField& g) {
  const GridChart& chart = g.chart;
  const std::size_t npts = chart.points();
  const auto sp = Spectral::get(chart);
  // r[x][(l*4+k)*6 + pair(i<j)] = R^l_{kij}, R(∂_i,∂_j)∂_k = R^l_{kij} ∂_l.
  std::vector<std::array<double, 96>> r(npts);
  for (auto& v : r) v.fill(0.0);
  auto pair_index = [](int i, int j) {
    for (int p = 0; p < 6; ++p) {
      if (kPairs[p][0] == i && kPairs[p][1] == j) return p;
    }
    return -1;
  };
  const bool flat_connection = std::all_of(conn.gamma.begin(), conn.gamma.end(), [](const Connection& c) {
    return c[0].isZero(0.0) && c[1].isZero(0.0) && c[2].isZero(0.0) && c[3].isZero(0.0);
  });
  if (!flat_connection) {
    for (int l = 0; l < 4; ++l) {
      for (int jj = 0; jj < 4; ++jj) {
        for (int k = 0; k < 4; ++k) {
          // Γ^l_{jk} as a field; its gradient feeds ∂_iΓ^l_{jk} − ∂_jΓ^l_{ik}.
          Eigen::VectorXd comp(static_cast<Eigen::Index>(npts));
          for (std::size_t x = 0; x < npts; ++x) comp[x] = conn.gamma[x][jj](l, k);
          const auto grad = sp->gradient(comp);
          for (int i = 0; i < 4; ++i) {
            if (i == jj) continue;
            const int p = pair_index(std::min(i, jj), std::max(i, jj));
            const double sign = i < jj ? 1.0 : -1.0;
            for (std::size_t x = 0; x < npts; ++x) r[x][(l * 4 + k) * 6 + p] += sign * grad[i][x];
          }
        }
      }
    }
  }

  CurvatureData out;
  out.operator_on_forms.resize(npts);
  out.ricci.resize(npts);
  out.scalar = ScalarField::constant(chart, 0.0);
  out.w_plus.resize(npts);
  out.w_minus.resize(npts);
  out.frame.resize(npts);
  const Eigen::Matrix<double, 6, 6> rot = sd_rotation();

  for (std::size_t x = 0; x < npts; ++x) {
    const Connection& gm = conn.gamma[x];
    // Full R^l_{kij} including the quadratic terms.
    auto big_r = [&](int l, int k, int i, int j) {
      if (i == j) return 0.0;
      const int p = pair_index(std::min(i, j), std::max(i, j));
      const double sign = i < j ? 1.0 : -1.0;
      double v = sign * r[x][(l * 4 + k) * 6 + p];
      for (int m = 0; m < 4; ++m) v += gm[i](l, m) * gm[j](m, k) - gm[j](l, m) * gm[i](m, k);
      return v;
    };
    // Rm(i,j,k,l) = g(R(∂_i,∂_j)∂_k, ∂_l).
    std::array<double, 256> rm{};
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        for (int k = 0; k < 4; ++k) {
          Eigen::Vector4d up;
          for (int l = 0; l < 4; ++l) up[l] = big_r(l, k, i, j);
          const Eigen::Vector4d low = g.g[x] * up;
          for (int l = 0; l < 4; ++l) rm[((i * 4 + j) * 4 + k) * 4 + l] = low[l];
        }
      }
    }
    Eigen::Matrix4d ric = Eigen::Matrix4d::Zero();
    for (int jj = 0; jj < 4; ++jj) {
      for (int k = 0; k < 4; ++k) {
        for (int i = 0; i < 4; ++i) ric(jj, k) += big_r(i, k, i, jj);
      }
    }
    out.ricci[x] = ric;
    out.scalar.values[x] = (g.g_inv[x].cwiseProduct(ric)).sum();
    for (int l = 0; l < 4; ++l) {
      for (int k = 0; k < 4; ++k) {
        for (int i = 0; i < 4; ++i) {
          for (int j = 0; j < 4; ++j) {
            const double b = big_r(l, k, i, j) + big_r(l, i, j, k) + big_r(l, j, k, i);
            out.bianchi_residual = std::max(out.bianchi_residual, std::abs(b));
          }
        }
      }
    }

    const Eigen::Matrix4d lchol = g.g[x].llt().matrixL();
    const Eigen::Matrix4d e = lchol.transpose().inverse();
    out.frame[x] = e;
    Eigen::Matrix<double, 6, 6> op;
    for (int p = 0; p < 6; ++p) {
      for (int q = 0; q < 6; ++q) {
        const int a = kPairs[p][0], b = kPairs[p][1], c = kPairs[q][0], d = kPairs[q][1];
        double v = 0.0;
        for (int i = 0; i < 4; ++i) {
          for (int jj = 0; jj < 4; ++jj) {
            const double eij = e(i, a) * e(jj, b);
            if (eij == 0.0) continue;
            for (int k = 0; k < 4; ++k) {
              for (int l = 0; l < 4; ++l) {
                v += eij * e(k, d) * e(l, c) * rm[((i * 4 + jj) * 4 + k) * 4 + l];
              }
            }
          }
        }
        op(p, q) = v;
      }
    }
    out.operator_on_forms[x] = op;
    const Eigen::Matrix<double, 6, 6> split = rot * op * rot.transpose();
    const double s12 = out.scalar.values[x] / 12.0;
    out.w_plus[x] = split.topLeftCorner<3, 3>() - s12 * Eigen::Matrix3d::Identity();
    out.w_minus[x] = split.bottomRightCorner<3, 3>() - s12 * Eigen::Matrix3d::Identity();
  }
  return out;
}

TwoFormValue weyl_apply(const CurvatureData& curv, const MetricField& g, std::size_t x,
                        const TwoFormValue& beta, bool self_dual_only) {
  (void)g;
  const Eigen::Matrix4d& e = curv.frame[x];
  const Eigen::Matrix4d framed = e.transpose() * beta.matrix() * e;
  Eigen::Matrix<double, 6, 1> v;
  for (int p = 0; p < 6; ++p) v[p] = framed(kPairs[p][0], kPairs[p][1]);
  const Eigen::Matrix<double, 6, 6> rot = sd_rotation();
  Eigen::Matrix<double, 6, 1> pm = rot * v;
  pm.head<3>() = curv.w_plus[x] * pm.head<3>();
  if (self_dual_only) {
    pm.tail<3>().setZero();
  } else {
    pm.tail<3>() = curv.w_minus[x] * pm.tail<3>();
  }
  const Eigen::Matrix<double, 6, 1> w = rot.transpose() * pm;
  Eigen::Matrix4d wm = Eigen::Matrix4d::Zero();
  for (int p = 0; p < 6; ++p) {
    wm(kPairs[p][0], kPairs[p][1]) = w[p];
    wm(kPairs[p][1], kPairs[p][0]) = -w[p];
  }
  const Eigen::Matrix4d einv = e.inverse();
  return TwoFormValue::from_matrix(einv.transpose() * wm * einv);
}

WellBalancedResiduals well_balanced_residuals(const MetricField& g, const ACSField& j,
                                              const WellBalancedOptions& options) {
  const GridChart& chart = g.chart;
  const std::size_t npts = chart.points();
  const auto sp = Spectral::get(chart);

  std::vector<TwoFormValue> candidates;
  for (const auto& f : flat_self_dual_basis()) candidates.push_back(f);
  for (const auto& f : flat_anti_self_dual_basis()) candidates.push_back(f);
  double best_min = -1.0;
  FormField anti = FormField::zero(chart, 2);
  for (const auto& c : candidates) {
    FormField trial = FormField::zero(chart, 2);
    double min_norm = 1e300;
    for (std::size_t x = 0; x < npts; ++x) {
      const auto part = split_j(c, j.at(x)).second;
      trial.set_two_form(x, part);
      min_norm = std::min(min_norm, norm2(part, g.at(x)));
    }
    if (min_norm > best_min) {
      best_min = min_norm;
      anti = std::move(trial);
    }
  }
  if (best_min < 1e-6) throw Error(ErrorKind::FrameDegenerate, "no global anti-invariant frame found");

  FormField phi = FormField::zero(chart, 2);
  FormField jphi = FormField::zero(chart, 2);
  for (std::size_t x = 0; x < npts; ++x) {
    const TwoFormValue a = anti.two_form_at(x);
    TwoFormValue p = a * std::sqrt(2.0 / norm2(a, g.at(x)));
    TwoFormValue q = j_act(p, j.at(x), 1e-8);
    if (options.rotation) {
      const double t = options.rotation->values[x];
      const TwoFormValue pr = std::cos(t) * p + std::sin(t) * q;
      q = std::cos(t) * q - std::sin(t) * p;
      p = pr;
    }
    phi.set_two_form(x, p);
    jphi.set_two_form(x, q);
  }
  const FormField omega = fundamental_form(g, j, 1e-9);
  const FormField domega = ext_d(omega);
  const auto d_omega = gradient_fields(*sp, omega);
  const auto d_phi = gradient_fields(*sp, phi);
  const auto d_jphi = gradient_fields(*sp, jphi);
  const ConnectionField conn = levi_civita(g);
  const NijenhuisField nij = nijenhuis_field(j);

  WellBalancedResiduals out;
  for (std::size_t x = 0; x < npts; ++x) {
    PointGeometry p;
    p.g = g.g[x];
    p.j = j.j[x];
    p.gamma = conn.gamma[x];
    p.nijenhuis = nij.tensor[x];
    p.domega = domega.at(x);
    p.omega = {omega.two_form_at(x), partials(*sp, omega, x, d_omega)};
    p.phi = {phi.two_form_at(x), partials(*sp, phi, x, d_phi)};
    p.jphi = {jphi.two_form_at(x), partials(*sp, jphi, x, d_jphi)};
    const auto r = well_balanced_at(p);
    out.res_iii = std::max(out.res_iii, r.res_iii);
    out.res_iv = std::max(out.res_iv, r.res_iv);
    out.res_v = std::max(out.res_v, r.res_v);
  }
  return out;
}

double hermitian_weyl_residual(const MetricField& g, const ACSField& j, const CurvatureData& curv) {
  double worst = 0.0;
  for (std::size_t x = 0; x < g.chart.points(); ++x) {
    const auto basis = split_basis(g.at(x), j.at(x));
    const TwoFormValue& b = basis.minus_basis[0];
    const TwoFormValue& jb = basis.minus_basis[1];
    const double lhs = inner(weyl_apply(curv, g, x, jb, true), jb, g.at(x));
    const double rhs = inner(weyl_apply(curv, g, x, b, true), b, g.at(x));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

WeitzenbockReport weitzenbock_residual(const FormField& psi, const MetricField& g, const CurvatureData& curv) {
  const GridChart& chart = g.chart;
  const auto sp = Spectral::get(chart);
  const ConnectionField conn = levi_civita(g);
  const auto dpsi = gradient_fields(*sp, psi);
  ScalarField nabla2 = ScalarField::constant(chart, 0.0);
  ScalarField curv_term = ScalarField::constant(chart, 0.0);
  for (std::size_t x = 0; x < chart.points(); ++x) {
    const FormJet jet{psi.two_form_at(x), partials(*sp, psi, x, dpsi)};
    std::array<TwoFormValue, 4> nab;
    for (int i = 0; i < 4; ++i) nab[i] = covariant_derivative(jet, conn.gamma[x], i);
    const MetricValue gx = g.at(x);
    nabla2.values[x] = tensor_norm2(nab, nab, gx, g.g_inv[x]);
    const TwoFormValue w = weyl_apply(curv, g, x, jet.value, false);
    curv_term.values[x] = curv.scalar.values[x] / 3.0 * norm2(jet.value, gx) - kWeylScale * inner(w, jet.value, gx);
  }
  const double dd = l2_inner(ext_d(psi), ext_d(psi), g);
  const FormField del = codiff(psi, g);
  const double cc = l2_inner(del, del, g);
  const double nn = integrate(nabla2, g);
  WeitzenbockReport out;
  out.lhs = dd + cc - nn;
  out.rhs = integrate(curv_term, g);
  out.relative_residual = std::abs(out.lhs - out.rhs) / std::max(nn, 1e-300);
  return out;
}

}  // namespace acslab
