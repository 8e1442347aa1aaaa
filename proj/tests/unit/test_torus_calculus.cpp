#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "acslab/errors.hpp"
#include "acslab/torus_calculus.hpp"

using namespace acslab;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

GridChart chart(int n) {
  GridChart c;
  c.resolution = n;
  return c;
}

FormField random_field(const GridChart& c, int degree, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  FormField f = FormField::zero(c, degree);
  for (auto& comp : f.components) {
    const double a = n(rng), b = n(rng), p = n(rng);
    comp = ScalarField::sample(c, [&](const Eigen::Vector4d& x) {
             return a * std::sin(kTwoPi * (x[0] + 2 * x[2]) + p) + b * std::cos(kTwoPi * (x[1] - x[3]));
           }).values;
  }
  return f;
}

}  // namespace

TEST_CASE("d of a coordinate function times e2") {
  const GridChart c = chart(8);
  FormField f = FormField::zero(c, 1);
  f.components[1] = ScalarField::sample(c, [](const Eigen::Vector4d& x) { return std::sin(kTwoPi * x[0]); }).values;
  const FormField df = ext_d(f);
  const ScalarField expected =
      ScalarField::sample(c, [](const Eigen::Vector4d& x) { return kTwoPi * std::cos(kTwoPi * x[0]); });
  CHECK((df.components[0] - expected.values).cwiseAbs().maxCoeff() < 1e-12);
  for (int k = 1; k < 6; ++k) CHECK(df.components[k].cwiseAbs().maxCoeff() < 1e-12);
  CHECK(ext_d(FormField::constant(c, TwoFormValue{{1, 2, 3, 4, 5, 6}})).max_abs() < 1e-12);
}

TEST_CASE("d squares to zero and the flat codifferential is its adjoint") {
  const GridChart c = chart(8);
  const MetricField g = MetricField::flat(c);
  for (int p = 0; p < 3; ++p) {
    const FormField a = random_field(c, p, 10 + p);
    CHECK(ext_d(ext_d(a)).max_abs() < 1e-10);
    const FormField b = random_field(c, p + 1, 20 + p);
    CHECK(std::abs(l2_inner(ext_d(a), b, g) - l2_inner(a, codiff(b, g), g)) < 1e-11);
  }
}

TEST_CASE("codifferential of parallel forms vanishes") {
  const GridChart c = chart(6);
  const MetricField g = MetricField::flat(c);
  CHECK(codiff(FormField::constant(c, TwoFormValue{{1, 0, 0, 0, 0, 1}}), g).max_abs() < 1e-13);
}

TEST_CASE("codifferential is the adjoint of d for a conformal metric") {
  const GridChart c = chart(8);
  const ScalarField u =
      ScalarField::sample(c, [](const Eigen::Vector4d& x) { return 0.1 * std::sin(kTwoPi * x[1]); });
  const MetricField g = MetricField::flat(c).conformal(u);
  const FormField a = random_field(c, 1, 3);
  const FormField b = random_field(c, 2, 4);
  CHECK(std::abs(l2_inner(ext_d(a), b, g) - l2_inner(a, codiff(b, g), g)) < 1e-10);
}

TEST_CASE("star is an involution on 2-forms") {
  const GridChart c = chart(6);
  const ScalarField u =
      ScalarField::sample(c, [](const Eigen::Vector4d& x) { return 0.2 * std::cos(kTwoPi * x[2]); });
  const MetricField g = MetricField::flat(c).conformal(u);
  const FormField a = random_field(c, 2, 5);
  CHECK((hodge_star(hodge_star(a, g), g) - a).max_abs() < 1e-12);
}

TEST_CASE("flat harmonic forms") {
  const GridChart c = chart(6);
  const MetricField g = MetricField::flat(c);
  const HarmonicBasis hb = harmonic_basis(g);
  CHECK(hb.basis.size() == 6);
  CHECK(hb.b_plus == 3);
  CHECK(hb.b_minus == 3);
  CHECK((hb.gram - Eigen::MatrixXd::Identity(6, 6)).norm() < 1e-12);
  for (const auto& h : hb.basis) {
    for (const auto& comp : h.components) CHECK(comp.maxCoeff() - comp.minCoeff() < 1e-12);
  }
  const auto sd = sd_harmonic_basis(g);
  REQUIRE(sd.size() == 3);
  for (const auto& f : sd) CHECK((hodge_star(f, g) - f).max_abs() < 1e-12);
}

TEST_CASE("harmonic forms of a conformal metric keep signature (3,3)") {
  const GridChart c = chart(8);
  const ScalarField u = ScalarField::sample(
      c, [](const Eigen::Vector4d& x) { return 0.1 * std::sin(kTwoPi * x[0]) * std::cos(kTwoPi * x[1]); });
  const MetricField g = MetricField::flat(c).conformal(u);
  const HarmonicBasis hb = harmonic_basis(g);
  CHECK(hb.basis.size() == 6);
  CHECK(hb.b_plus == 3);
  CHECK(hb.b_minus == 3);
  CHECK((hb.gram - Eigen::MatrixXd::Identity(6, 6)).norm() < 1e-10);
  for (const auto& h : hb.basis) {
    CHECK(ext_d(h).max_abs() < 1e-8);
    CHECK(codiff(h, g).max_abs() < 1e-8);
  }
}

TEST_CASE("Hodge decomposition") {
  const GridChart c = chart(8);
  const MetricField g = MetricField::flat(c);
  const FormField k = FormField::constant(c, TwoFormValue{{1, -2, 0, 0.5, 0, 3}});
  const HodgeParts pk = hodge_decompose(k, g);
  CHECK((pk.harmonic - k).max_abs() < 1e-10);
  CHECK(pk.exact.max_abs() < 1e-10);
  CHECK(pk.coexact.max_abs() < 1e-10);

  const FormField exact = ext_d(random_field(c, 1, 6));
  const HodgeParts pe = hodge_decompose(exact, g);
  CHECK(pe.harmonic.max_abs() < 1e-9);
  CHECK((pe.exact - exact).max_abs() < 1e-8);
  CHECK(pe.coexact.max_abs() < 1e-8);

  const FormField mixed = random_field(c, 2, 7) + k;
  const HodgeParts pm = hodge_decompose(mixed, g);
  CHECK((pm.harmonic + pm.exact + pm.coexact - mixed).max_abs() < 1e-8);
  CHECK(std::abs(l2_inner(pm.exact, pm.coexact, g)) < 1e-8);
  CHECK(ext_d(pm.exact).max_abs() < 1e-8);
}

TEST_CASE("integration and wedge") {
  const GridChart c = chart(6);
  const MetricField g = MetricField::flat(c);
  const FormField w = FormField::constant(c, TwoFormValue{{1, 0, 0, 0, 0, 1}});
  CHECK(integrate_top(wedge(w, w)) == doctest::Approx(2.0));
  CHECK(integrate(ScalarField::constant(c, 3.0), g) == doctest::Approx(3.0));
  CHECK(l2_norm(w, g) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("grid validation") {
  GridChart odd;
  odd.resolution = 7;
  CHECK_THROWS_AS(odd.validate(), Error);
  GridChart neg;
  neg.periods[2] = -1.0;
  CHECK_THROWS_AS(neg.validate(), Error);
}
