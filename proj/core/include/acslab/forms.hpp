#pragma once

// Exterior algebra of R^4 with the lexicographic wedge basis
// e^{i1..ip}, i1 < ... < ip. Degree-p coefficient vectors have length C(4,p).

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace acslab::forms {

using Coeffs = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 6, 1>;
using CompoundMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 6, 6>;

constexpr int kDim = 4;

int dimension(int degree);

/// Sorted coordinate indices (0-based) of the k-th basis element of degree p.
std::span<const int> indices(int degree, int k);

/// Position of a sorted index tuple in the degree-p basis, or -1.
int position(std::span<const int> sorted);

/// Sign and position of e^{i} ∧ e^{I} for a sorted tuple I; sign 0 if i ∈ I.
struct SignedIndex {
  int sign;
  int position;
};
SignedIndex prepend(int i, int degree, int k);

/// Complement tuple of basis element k and the sign of the permutation (I, I^c).
SignedIndex complement(int degree, int k);

Coeffs wedge(int p, const Coeffs& a, int q, const Coeffs& b);

/// p-th compound matrix: entries are the p×p minors of A.
CompoundMatrix compound(const Eigen::Matrix4d& a, int degree);

/// Hodge star of a degree-p form with respect to metric g, given g^{-1} and sqrt(det g).
Coeffs star(int degree, const Coeffs& alpha, const Eigen::Matrix4d& g_inv, double sqrt_det);

/// Pointwise inner product ⟨a,b⟩_g in which every e^I has unit norm for the flat metric.
double inner(int degree, const Coeffs& a, const Coeffs& b, const Eigen::Matrix4d& g_inv);

/// Interior product ι_X of a degree-p form.
Coeffs interior(int degree, const Eigen::Vector4d& x, const Coeffs& alpha);

/// Evaluates a 3-form on three vectors (determinant convention).
double evaluate3(const Coeffs& gamma, const Eigen::Vector4d& x, const Eigen::Vector4d& y,
                 const Eigen::Vector4d& z);

}  // namespace acslab::forms
