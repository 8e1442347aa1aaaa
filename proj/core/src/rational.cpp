#include "acslab/rational.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>

#include "acslab/errors.hpp"

namespace acslab {
namespace {

std::int64_t checked(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw Error(ErrorKind::DegreeOverflow, "rational overflow");
  return static_cast<std::int64_t>(v);
}

Rational make(__int128 n, __int128 d) {
  if (d == 0) throw Error(ErrorKind::DimensionMismatch, "rational division by zero");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  __int128 a = n < 0 ? -n : n;
  __int128 b = d;
  while (b != 0) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    n /= a;
    d /= a;
  }
  return Rational(checked(n), checked(d));
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) : num_(n), den_(d) {
  if (d == 0) throw Error(ErrorKind::DimensionMismatch, "rational division by zero");
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  const std::int64_t g = std::gcd(num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

Rational Rational::parse(const std::string& text) {
  const auto slash = text.find('/');
  try {
    std::size_t used = 0;
    const std::string ns = text.substr(0, slash);
    const std::int64_t n = std::stoll(ns, &used);
    if (used != ns.size()) throw std::invalid_argument(text);
    if (slash == std::string::npos) return Rational(n);
    const std::string ds = text.substr(slash + 1);
    const std::int64_t d = std::stoll(ds, &used);
    if (used != ds.size() || d == 0) throw std::invalid_argument(text);
    return Rational(n, d);
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::ParseError, "bad rational \"" + text + "\"");
  }
}

std::optional<Rational> Rational::from_double(double x, std::int64_t max_den) {
  if (!std::isfinite(x)) return std::nullopt;
  // Continued-fraction convergents.
  std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  for (int i = 0; i < 64; ++i) {
    const double a = std::floor(r);
    if (std::abs(a) > 9e15) return std::nullopt;
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t h2 = ai * h1 + h0;
    const std::int64_t k2 = ai * k1 + k0;
    if (k2 > max_den) return std::nullopt;
    if (static_cast<double>(h2) / static_cast<double>(k2) == x) return Rational(h2, k2);
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    const double frac = r - a;
    if (frac == 0.0) return std::nullopt;
    r = 1.0 / frac;
  }
  return std::nullopt;
}

std::string Rational::str() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  return make(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
              static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return make(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  return make(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
}

int exact_rank(std::vector<std::vector<Rational>> rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows[0].size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][c].is_zero()) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (rows[r][c].is_zero()) continue;
      const Rational factor = rows[r][c] / rows[rank][c];
      for (std::size_t k = c; k < cols; ++k) rows[r][k] = rows[r][k] - factor * rows[rank][k];
    }
    ++rank;
  }
  return static_cast<int>(rank);
}

int matrix_rank(const Eigen::MatrixXd& m, double tol, bool* exact) {
  std::vector<std::vector<Rational>> rows(static_cast<std::size_t>(m.rows()));
  bool ok = true;
  for (Eigen::Index i = 0; i < m.rows() && ok; ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const auto q = Rational::from_double(m(i, j));
      if (!q) {
        ok = false;
        break;
      }
      rows[static_cast<std::size_t>(i)].push_back(*q);
    }
  }
  if (ok) {
    try {
      const int r = exact_rank(std::move(rows));
      if (exact) *exact = true;
      return r;
    } catch (const Error&) {
    }
  }
  if (exact) *exact = false;
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > tol * sv[0]) ++r;
  }
  return r;
}

}  // namespace acslab
