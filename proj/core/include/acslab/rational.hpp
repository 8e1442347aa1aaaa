#pragma once

// Exact rationals on 64-bit integers with overflow detection, and exact
// matrix rank for small dense matrices.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace acslab {

class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t n) : num_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t n, std::int64_t d);

  /// Parses "p", "-p" or "p/q". Throws ParseError.
  static Rational parse(const std::string& text);
  /// Exact conversion when x is p/q with q ≤ max_den, otherwise nullopt.
  static std::optional<Rational> from_double(double x, std::int64_t max_den = 1000000);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  bool is_zero() const { return num_ == 0; }
  std::string str() const;

  Rational operator-() const { return {-num_, den_}; }
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) = default;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Rank by Gaussian elimination over the rationals.
int exact_rank(std::vector<std::vector<Rational>> rows);

/// Exact rank when every entry is a small-denominator rational, otherwise
/// the SVD rank with the given relative tolerance.
int matrix_rank(const Eigen::MatrixXd& m, double tol = 1e-10, bool* exact = nullptr);

}  // namespace acslab
