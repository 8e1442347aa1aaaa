#include "acslab/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

namespace acslab::linalg {

KrylovResult pcg(const LinearMap& a, const Eigen::VectorXd& b, const LinearMap& precond,
                 double tol, int max_iter, const Eigen::VectorXd& x0) {
  KrylovResult out;
  out.x = x0.size() == b.size() ? x0 : Eigen::VectorXd::Zero(b.size());
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    out.x.setZero();
    out.converged = true;
    return out;
  }
  Eigen::VectorXd r = b - (x0.size() == b.size() ? a(out.x) : Eigen::VectorXd::Zero(b.size()));
  Eigen::VectorXd z = precond ? precond(r) : r;
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  out.relative_residual = r.norm() / bnorm;
  if (out.relative_residual < tol) {
    out.converged = true;
    return out;
  }
  for (int it = 1; it <= max_iter; ++it) {
    const Eigen::VectorXd ap = a(p);
    const double pap = p.dot(ap);
    out.iterations = it;
    if (!(pap > 0.0)) break;
    const double alpha = rz / pap;
    out.x += alpha * p;
    r -= alpha * ap;
    out.relative_residual = r.norm() / bnorm;
    if (out.relative_residual < tol) {
      out.converged = true;
      break;
    }
    z = precond ? precond(r) : r;
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  return out;
}

KrylovResult gmres(const LinearMap& a, const Eigen::VectorXd& b, const LinearMap& precond,
                   double tol, int max_iter, int restart, const Eigen::VectorXd& x0) {
  KrylovResult out;
  const Eigen::Index n = b.size();
  out.x = x0.size() == n ? x0 : Eigen::VectorXd::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    out.x.setZero();
    out.converged = true;
    return out;
  }
  auto apply_m = [&](const Eigen::VectorXd& v) { return precond ? precond(v) : v; };
  int total = 0;
  while (total < max_iter) {
    Eigen::VectorXd r = b - a(out.x);
    double beta = r.norm();
    out.relative_residual = beta / bnorm;
    if (out.relative_residual < tol) {
      out.converged = true;
      break;
    }
    const int m = std::min(restart, max_iter - total);
    std::vector<Eigen::VectorXd> v;
    v.reserve(m + 1);
    v.push_back(r / beta);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m + 1, m);
    Eigen::VectorXd cs = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd sn = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(m + 1);
    g[0] = beta;
    int k = 0;
    for (; k < m; ++k) {
      Eigen::VectorXd w = a(apply_m(v[k]));
      for (int i = 0; i <= k; ++i) {
        h(i, k) = w.dot(v[i]);
        w -= h(i, k) * v[i];
      }
      h(k + 1, k) = w.norm();
      for (int i = 0; i < k; ++i) {
        const double t = cs[i] * h(i, k) + sn[i] * h(i + 1, k);
        h(i + 1, k) = -sn[i] * h(i, k) + cs[i] * h(i + 1, k);
        h(i, k) = t;
      }
      const double denom = std::hypot(h(k, k), h(k + 1, k));
      cs[k] = denom == 0.0 ? 1.0 : h(k, k) / denom;
      sn[k] = denom == 0.0 ? 0.0 : h(k + 1, k) / denom;
      const double hk1 = h(k + 1, k);
      h(k, k) = cs[k] * h(k, k) + sn[k] * hk1;
      h(k + 1, k) = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = cs[k] * g[k];
      ++total;
      out.relative_residual = std::abs(g[k + 1]) / bnorm;
      if (out.relative_residual < tol || hk1 == 0.0) {
        ++k;
        break;
      }
      v.push_back(w / hk1);
    }
    Eigen::VectorXd y = h.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
    Eigen::VectorXd update = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < k; ++i) update += y[i] * v[i];
    out.x += apply_m(update);
    out.iterations = total;
    if (out.relative_residual < tol) {
      out.relative_residual = (b - a(out.x)).norm() / bnorm;
      if (out.relative_residual < 10.0 * tol) {
        out.converged = true;
        break;
      }
    }
  }
  return out;
}

namespace {

// Basis T of span(S) with T^T G T = I, dropping numerically dependent directions.
Eigen::MatrixXd orthonormalizer(const Eigen::MatrixXd& gram) {
  Eigen::VectorXd d = gram.diagonal().cwiseMax(0.0);
  Eigen::VectorXd dinv(d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) dinv[i] = d[i] > 0.0 ? 1.0 / std::sqrt(d[i]) : 0.0;
  const Eigen::MatrixXd scaled = dinv.asDiagonal() * gram * dinv.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scaled);
  const double top = es.eigenvalues().maxCoeff();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()[i] > 1e-11 * top) keep.push_back(i);
  }
  Eigen::MatrixXd t(gram.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    t.col(static_cast<Eigen::Index>(c)) =
        dinv.asDiagonal() * es.eigenvectors().col(keep[c]) / std::sqrt(es.eigenvalues()[keep[c]]);
  }
  return t;
}

}  // namespace

EigenResult lobpcg(const BlockMap& a, const BlockMap& b, const BlockMap& precond,
                   const Eigen::MatrixXd& x0, const LobpcgOptions& options) {
  const Eigen::Index m = x0.cols();
  const Eigen::Index wanted = std::min<Eigen::Index>(options.wanted, m);
  EigenResult out;

  Eigen::MatrixXd x = x0;
  Eigen::MatrixXd ax = a(x);
  Eigen::MatrixXd bx = b(x);
  Eigen::MatrixXd p, ap, bp;
  Eigen::VectorXd lambda;

  auto rayleigh_ritz = [&](const Eigen::MatrixXd& s, const Eigen::MatrixXd& as,
                           const Eigen::MatrixXd& bs, Eigen::MatrixXd& coef) {
    Eigen::MatrixXd gb = s.transpose() * bs;
    gb = 0.5 * (gb + gb.transpose()).eval();
    Eigen::MatrixXd ga = s.transpose() * as;
    ga = 0.5 * (ga + ga.transpose()).eval();
    const Eigen::MatrixXd t = orthonormalizer(gb);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t.transpose() * ga * t);
    const Eigen::Index k = std::min<Eigen::Index>(m, t.cols());
    coef = t * es.eigenvectors().leftCols(k);
    lambda = es.eigenvalues().head(k);
  };

  Eigen::MatrixXd coef;
  rayleigh_ritz(x, ax, bx, coef);
  x = x * coef;
  ax = ax * coef;
  bx = bx * coef;

  for (int it = 0; it <= options.max_iter; ++it) {
    const Eigen::MatrixXd r = ax - bx * lambda.asDiagonal();
    out.residuals.resize(lambda.size());
    bool done = true;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
      const double denom = std::max(std::abs(lambda[i]), options.scale) * bx.col(i).norm();
      out.residuals[i] = denom > 0.0 ? r.col(i).norm() / denom : r.col(i).norm();
      if (i < wanted && out.residuals[i] > options.tol) done = false;
    }
    out.iterations = it;
    if (done) {
      out.converged = true;
      break;
    }
    if (it == options.max_iter) break;

    std::vector<Eigen::Index> active;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
      if (out.residuals[i] > options.tol) active.push_back(i);
    }
    Eigen::MatrixXd ra(r.rows(), static_cast<Eigen::Index>(active.size()));
    for (std::size_t c = 0; c < active.size(); ++c) ra.col(static_cast<Eigen::Index>(c)) = r.col(active[c]);
    Eigen::MatrixXd w = precond ? precond(ra) : ra;
    for (Eigen::Index c = 0; c < w.cols(); ++c) {
      const double nrm = w.col(c).norm();
      if (nrm > 0.0) w.col(c) /= nrm;
    }
    const Eigen::MatrixXd aw = a(w);
    const Eigen::MatrixXd bw = b(w);
    const Eigen::Index np = p.cols();
    Eigen::MatrixXd s(x.rows(), m + w.cols() + np);
    Eigen::MatrixXd as(x.rows(), s.cols());
    Eigen::MatrixXd bs(x.rows(), s.cols());
    s << x, w, p;
    as << ax, aw, ap;
    bs << bx, bw, bp;
    rayleigh_ritz(s, as, bs, coef);
    const Eigen::Index tail = s.cols() - m;
    const Eigen::MatrixXd ctail = coef.bottomRows(tail);
    p = s.rightCols(tail) * ctail;
    ap = as.rightCols(tail) * ctail;
    bp = bs.rightCols(tail) * ctail;
    x = s * coef;
    ax = as * coef;
    bx = bs * coef;
  }
  out.values = lambda.head(wanted);
  out.vectors = x.leftCols(wanted);
  out.residuals = out.residuals.head(wanted).eval();
  return out;
}

}  // namespace acslab::linalg
