#include "acslab/forms.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace acslab::forms {
namespace {

struct Tables {
  std::array<std::vector<std::array<int, 4>>, 5> basis;

  Tables() {
    for (int mask = 0; mask < 16; ++mask) {
      std::array<int, 4> idx{};
      int p = 0;
      for (int i = 0; i < 4; ++i) {
        if (mask & (1 << i)) idx[p++] = i;
      }
      basis[p].push_back(idx);
    }
    for (auto& b : basis) {
      std::sort(b.begin(), b.end());
    }
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

int permutation_sign(std::array<int, 4> perm, int n) {
  int sign = 1;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (perm[i] > perm[j]) sign = -sign;
    }
  }
  return sign;
}

}  // namespace

int dimension(int degree) {
  static constexpr std::array<int, 5> dims{1, 4, 6, 4, 1};
  assert(degree >= 0 && degree <= 4);
  return dims[degree];
}

std::span<const int> indices(int degree, int k) {
  const auto& b = tables().basis[degree][k];
  return {b.data(), static_cast<std::size_t>(degree)};
}

int position(std::span<const int> sorted) {
  const int p = static_cast<int>(sorted.size());
  const auto& b = tables().basis[p];
  for (int k = 0; k < static_cast<int>(b.size()); ++k) {
    if (std::equal(sorted.begin(), sorted.end(), b[k].begin())) return k;
  }
  return -1;
}

SignedIndex prepend(int i, int degree, int k) {
  auto idx = indices(degree, k);
  std::array<int, 4> merged{};
  int n = 0;
  int sign = 1;
  bool placed = false;
  for (int m = 0; m < degree; ++m) {
    if (idx[m] == i) return {0, -1};
    if (!placed && i < idx[m]) {
      merged[n++] = i;
      placed = true;
    }
    if (!placed) sign = -sign;
    merged[n++] = idx[m];
  }
  if (!placed) merged[n++] = i;
  return {sign, position({merged.data(), static_cast<std::size_t>(n)})};
}

SignedIndex complement(int degree, int k) {
  auto idx = indices(degree, k);
  std::array<int, 4> perm{};
  std::array<int, 4> rest{};
  int r = 0;
  for (int m = 0; m < degree; ++m) perm[m] = idx[m];
  for (int i = 0; i < 4; ++i) {
    if (std::find(idx.begin(), idx.end(), i) == idx.end()) rest[r++] = i;
  }
  for (int m = 0; m < r; ++m) perm[degree + m] = rest[m];
  return {permutation_sign(perm, 4), position({rest.data(), static_cast<std::size_t>(r)})};
}

Coeffs wedge(int p, const Coeffs& a, int q, const Coeffs& b) {
  const int pq = p + q;
  Coeffs out = Coeffs::Zero(pq <= 4 ? dimension(pq) : 0);
  if (pq > 4) return out;
  for (int i = 0; i < dimension(p); ++i) {
    if (a[i] == 0.0) continue;
    auto ii = indices(p, i);
    for (int j = 0; j < dimension(q); ++j) {
      if (b[j] == 0.0) continue;
      auto jj = indices(q, j);
      std::array<int, 4> perm{};
      int n = 0;
      bool repeated = false;
      for (int v : ii) perm[n++] = v;
      for (int v : jj) {
        if (std::find(ii.begin(), ii.end(), v) != ii.end()) repeated = true;
        perm[n++] = v;
      }
      if (repeated) continue;
      const int sign = permutation_sign(perm, n);
      std::array<int, 4> sorted = perm;
      std::sort(sorted.begin(), sorted.begin() + n);
      out[position({sorted.data(), static_cast<std::size_t>(n)})] += sign * a[i] * b[j];
    }
  }
  return out;
}

CompoundMatrix compound(const Eigen::Matrix4d& a, int degree) {
  const int n = dimension(degree);
  CompoundMatrix c(n, n);
  for (int i = 0; i < n; ++i) {
    auto ii = indices(degree, i);
    for (int j = 0; j < n; ++j) {
      auto jj = indices(degree, j);
      if (degree == 0) {
        c(i, j) = 1.0;
        continue;
      }
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4> minor(degree, degree);
      for (int r = 0; r < degree; ++r) {
        for (int s = 0; s < degree; ++s) minor(r, s) = a(ii[r], jj[s]);
      }
      c(i, j) = minor.determinant();
    }
  }
  return c;
}

Coeffs star(int degree, const Coeffs& alpha, const Eigen::Matrix4d& g_inv, double sqrt_det) {
  const Coeffs raised = compound(g_inv, degree) * alpha;
  Coeffs out = Coeffs::Zero(dimension(4 - degree));
  for (int k = 0; k < dimension(degree); ++k) {
    const auto c = complement(degree, k);
    out[c.position] += sqrt_det * c.sign * raised[k];
  }
  return out;
}

double inner(int degree, const Coeffs& a, const Coeffs& b, const Eigen::Matrix4d& g_inv) {
  return a.dot(compound(g_inv, degree) * b);
}

Coeffs interior(int degree, const Eigen::Vector4d& x, const Coeffs& alpha) {
  Coeffs out = Coeffs::Zero(dimension(degree - 1));
  for (int k = 0; k < dimension(degree); ++k) {
    if (alpha[k] == 0.0) continue;
    auto idx = indices(degree, k);
    for (int m = 0; m < degree; ++m) {
      std::array<int, 4> rest{};
      int r = 0;
      for (int t = 0; t < degree; ++t) {
        if (t != m) rest[r++] = idx[t];
      }
      const double sign = (m % 2 == 0) ? 1.0 : -1.0;
      out[position({rest.data(), static_cast<std::size_t>(r)})] += sign * x[idx[m]] * alpha[k];
    }
  }
  return out;
}

double evaluate3(const Coeffs& gamma, const Eigen::Vector4d& x, const Eigen::Vector4d& y,
                 const Eigen::Vector4d& z) {
  double total = 0.0;
  for (int k = 0; k < 4; ++k) {
    auto idx = indices(3, k);
    Eigen::Matrix3d m;
    for (int r = 0; r < 3; ++r) {
      m(r, 0) = x[idx[r]];
      m(r, 1) = y[idx[r]];
      m(r, 2) = z[idx[r]];
    }
    total += gamma[k] * m.determinant();
  }
  return total;
}

}  // namespace acslab::forms
