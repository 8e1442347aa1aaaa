#include <doctest.h>

#include <random>

#include "acslab/errors.hpp"
#include "acslab/pointwise.hpp"

using namespace acslab;

namespace {

Eigen::Matrix4d random_spd(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Eigen::Matrix4d a;
  for (int i = 0; i < 16; ++i) a(i) = n(rng);
  return a * a.transpose() + Eigen::Matrix4d::Identity();
}

// J compatible with g: conjugate J_std by the inverse Cholesky factor of g.
ACSValue compatible_j(const Eigen::Matrix4d& g) {
  const Eigen::Matrix4d l = g.llt().matrixL();
  return {l.transpose().inverse() * ACSValue::standard().j * l.transpose()};
}

double direct_pullback(const Eigen::Matrix4d& a, const Eigen::Matrix4d& j, int p, int q) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) s += a(i, k) * j(i, p) * j(k, q);
  return s;
}

}  // namespace

TEST_CASE("standard structure acts as Je1 = e2, Je3 = e4") {
  const Eigen::Matrix4d j = ACSValue::standard().j;
  CHECK(j.col(0) == Eigen::Vector4d(0, 1, 0, 0));
  CHECK(j.col(2) == Eigen::Vector4d(0, 0, 0, 1));
  CHECK((j * j + Eigen::Matrix4d::Identity()).norm() == 0.0);
}

TEST_CASE("splitting e13 under the standard structure") {
  const auto [inv, anti] = split_j(basis_form(0, 2), ACSValue::standard());
  const TwoFormValue half_sum = 0.5 * (basis_form(0, 2) + basis_form(1, 3));
  const TwoFormValue half_diff = 0.5 * (basis_form(0, 2) - basis_form(1, 3));
  CHECK((inv - half_sum).max_abs() < 1e-15);
  CHECK((anti - half_diff).max_abs() < 1e-15);
}

TEST_CASE("random forms split and recombine; pullback matches a direct sum") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Matrix4d g = random_spd(rng);
    const ACSValue j = compatible_j(g);
    TwoFormValue a;
    for (auto& c : a.c) c = n(rng);
    const auto [inv, anti] = split_j(a, j);
    CHECK((inv + anti - a).max_abs() < 1e-12);
    const Eigen::Matrix4d m = a.matrix();
    const TwoFormValue pb = pullback_by(a, j);
    CHECK(std::abs(pb.matrix()(0, 1) - direct_pullback(m, j.j, 0, 1)) < 1e-10);
    CHECK((pullback_by(inv, j) - inv).max_abs() < 1e-10);
    CHECK((pullback_by(anti, j) + anti).max_abs() < 1e-10);
    CHECK((j_act(j_act(anti, j, 1e-8), j, 1e-8) + anti).max_abs() < 1e-9);
  }
}

TEST_CASE("J acting on beta") {
  const TwoFormValue beta = basis_form(0, 2) - basis_form(1, 3);
  const TwoFormValue expected = basis_form(0, 3) + basis_form(1, 2);
  CHECK((j_act(beta, ACSValue::standard()) - expected).max_abs() < 1e-15);
  CHECK(j_act(TwoFormValue{}, ACSValue::standard()).max_abs() == 0.0);
  CHECK_THROWS_AS(j_act(basis_form(0, 1), ACSValue::standard()), Error);
}

TEST_CASE("Hodge star and fundamental form") {
  const MetricValue e = MetricValue::euclidean();
  CHECK((hodge_star(basis_form(0, 1), e) - basis_form(2, 3)).max_abs() < 1e-15);
  const TwoFormValue omega = fundamental_form(e, ACSValue::standard());
  CHECK((omega - (basis_form(0, 1) + basis_form(2, 3))).max_abs() < 1e-15);
  CHECK((fundamental_form(e, -ACSValue::standard()) + omega).max_abs() < 1e-15);
  CHECK(pfaffian(omega) == doctest::Approx(1.0));

  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const MetricValue g{random_spd(rng)};
    const ACSValue j = compatible_j(g.g);
    const TwoFormValue w = fundamental_form(g, j);
    CHECK(norm2(w, g) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK((hodge_star(w, g) - w).max_abs() < 1e-10);
    // ω(X,Y) = g(JX,Y) evaluated directly.
    CHECK(std::abs(w.matrix()(0, 2) - (g.g * j.j)(2, 0)) < 1e-12);
    const ACSValue back = acs_from_form(g, w);
    CHECK((back.j - j.j).norm() < 1e-9);
  }
  CHECK_THROWS_AS(fundamental_form(e, ACSValue{Eigen::Matrix4d::Identity()}), Error);
}

TEST_CASE("structures from self-dual forms") {
  const MetricValue e = MetricValue::euclidean();
  const TwoFormValue omega = basis_form(0, 1) + basis_form(2, 3);
  CHECK((acs_from_form(e, omega).j - ACSValue::standard().j).norm() < 1e-14);
  CHECK((acs_from_form(e, -1.0 * omega).j + ACSValue::standard().j).norm() < 1e-14);
  const TwoFormValue beta = basis_form(0, 2) - basis_form(1, 3);
  const TwoFormValue mixed = (1.0 / std::sqrt(2.0)) * (omega + beta);
  const ACSValue jt = acs_from_form(e, mixed);
  CHECK(jt.square_residual() < 1e-12);
  CHECK(compatibility_residual(e, jt) < 1e-12);
  CHECK_THROWS_AS(acs_from_form(e, basis_form(0, 1) - basis_form(2, 3)), Error);
  CHECK_THROWS_AS(acs_from_form(e, 2.0 * omega), Error);
}

TEST_CASE("averaged metric") {
  Eigen::Matrix4d g = Eigen::Matrix4d::Identity();
  g(1, 1) = 2.0;
  const MetricValue avg = average_metric(MetricValue{g}, ACSValue::standard());
  const Eigen::Vector4d expected(1.5, 1.5, 1.0, 1.0);
  CHECK((avg.g - Eigen::Matrix4d(expected.asDiagonal())).norm() < 1e-15);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const MetricValue gr{random_spd(rng)};
    const ACSValue j = compatible_j(random_spd(rng));
    CHECK(compatibility_residual(average_metric(gr, j), j) < 1e-12);
    const MetricValue gc{random_spd(rng)};
    const ACSValue jc = compatible_j(gc.g);
    CHECK((average_metric(gc, jc).g - gc.g).norm() < 1e-10 * gc.g.norm());
  }
}

TEST_CASE("adapted bases are orthogonal") {
  std::mt19937_64 rng(4);
  const MetricValue g{random_spd(rng)};
  const ACSValue j = compatible_j(g.g);
  const SplitBasis b = split_basis(g, j);
  CHECK(inner(b.omega, b.minus_basis[0], g) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(inner(b.minus_basis[0], b.minus_basis[1], g) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  for (const auto& m : b.minus_basis) CHECK((split_j(m, j).first).max_abs() < 1e-10);
  for (const auto& a : b.asd_basis) CHECK((hodge_star(a, g) + a).max_abs() < 1e-10);
  CHECK_THROWS_AS((MetricValue{-Eigen::Matrix4d::Identity()}).validate(), Error);
}
