#include <doctest.h>

#include <cmath>
#include <numbers>

#include "acslab/anti_invariant.hpp"
#include "acslab/errors.hpp"
#include "acslab/families.hpp"

using namespace acslab;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

GridChart chart(int n) {
  GridChart c;
  c.resolution = n;
  return c;
}

ScalarField wave(const GridChart& c, double a, int axis, bool sine) {
  return ScalarField::sample(c, [=](const Eigen::Vector4d& x) {
    return a * (sine ? std::sin(kTwoPi * x[axis]) : std::cos(kTwoPi * x[axis]));
  });
}

double max_diff(const ACSField& a, const ACSField& b) {
  double m = 0.0;
  for (std::size_t p = 0; p < a.j.size(); ++p) m = std::max(m, (a.j[p] - b.j[p]).cwiseAbs().maxCoeff());
  return m;
}

}  // namespace

TEST_CASE("r = 0 reproduces the base structure") {
  const GridChart c = chart(6);
  const MetricField g = MetricField::flat(c);
  const ACSField j = ACSField::standard(c);
  const FormField alpha = FormField::constant(c, flat_beta());
  const ScalarField zero = ScalarField::constant(c, 0.0);
  CHECK(max_diff(build_from_alpha(g, j, alpha, zero), j) == 0.0);
  CHECK(max_diff(build_from_alpha(g, j, alpha, zero, Sign::Minus), j.negated()) == 0.0);
  CHECK(max_diff(twisted_from_alpha(g, j, alpha, zero), j) == 0.0);
  const FormField none = FormField::zero(c, 2);
  CHECK(max_diff(lee_structure(g, j, none), j) < 1e-14);
  CHECK(max_diff(conformal_structure(g, j, none), j) < 1e-14);
  CHECK(max_diff(conformal_structure(g, j, none, Sign::Minus), j.negated()) < 1e-14);
  CHECK_THROWS_AS(build_from_alpha(g, j, alpha, ScalarField::constant(c, 2.0)), Error);
}

TEST_CASE("constructed structures square to -1 and stay compatible") {
  const GridChart c = chart(6);
  const MetricField g = MetricField::flat(c);
  const ACSField j = ACSField::standard(c);
  const FormField alpha = FormField::constant(c, flat_beta());
  for (const ACSField& jt : {lee_structure(g, j, alpha), conformal_structure(g, j, alpha),
                             build_from_alpha(g, j, alpha, wave(c, 0.5, 0, false)),
                             twisted_from_alpha(g, j, alpha, wave(c, 0.5, 1, true))}) {
    CHECK(jt.max_square_residual() < 1e-12);
    CHECK(compatibility_residual(g, jt) < 1e-12);
  }
}

TEST_CASE("Lee structure shares exactly the class of alpha with the base") {
  const GridChart c = chart(6);
  const MetricField g = MetricField::flat(c);
  const ACSField j = ACSField::standard(c);
  const ACSField jl = lee_structure(g, j, FormField::constant(c, flat_beta()));
  CHECK(intersection_dim(j, jl, g) == 1);
  CHECK(intersection_dim(j, twisted_from_alpha(g, j, FormField::constant(c, flat_beta()), wave(c, 0.4, 0, false)), g) == 1);
  CHECK_THROWS_AS(intersection_dim(j, j, g), Error);
  CHECK_THROWS_AS(intersection_dim(j, j.negated(), g), Error);
}

TEST_CASE("a generic pair has no common class") {
  const GridChart c = chart(6);
  const MetricField g = MetricField::flat(c);
  const ScalarField l = wave(c, 0.4, 0, false);
  const ScalarField s = wave(c, 0.3, 1, true);
  ScalarField f = l;
  f.values = (1.0 - l.values.array().square() - s.values.array().square()).sqrt();
  CHECK(intersection_dim(ACSField::standard(c), torus_family(f, l, s).j, g) == 0);
}

TEST_CASE("torus family predictions") {
  const GridChart c = chart(8);
  const MetricField g = MetricField::flat(c);
  const ScalarField one = ScalarField::constant(c, 1.0);
  const ScalarField zero = ScalarField::constant(c, 0.0);
  const TorusFamily std_family = torus_family(one, zero, zero);
  CHECK(std_family.predicted_h_minus == 2);
  CHECK(max_diff(std_family.j, ACSField::standard(c)) < 1e-14);

  const TorusFamily circle = torus_family(wave(c, 1.0, 0, false), wave(c, 1.0, 0, true), zero);
  CHECK(circle.predicted_h_minus == 1);
  CHECK(h_minus(g, circle.j).kernel_dim == 1);

  const auto t = two_bump_triple(c);
  CHECK(torus_family(t[0], t[1], t[2]).predicted_h_minus == 0);
  CHECK_THROWS_AS(torus_family(one, one, zero), Error);
}

TEST_CASE("hyperkahler family substitution") {
  const FamilyTriple zero = h2_family(0.0, 0.0);
  CHECK(zero.f == doctest::Approx(1.0));
  CHECK(zero.l == doctest::Approx(0.0));
  CHECK(zero.s == doctest::Approx(0.0));
  for (const auto& [k1, k2] : {std::pair{1.0, 0.0}, std::pair{0.3, -0.7}}) {
    const FamilyTriple t = h2_family(k1, k2);
    CHECK(t.f * t.f + t.l * t.l + t.s * t.s == doctest::Approx(1.0));
    // |β|² = 2 and u = v = 0 on the flat torus.
    const double w = 1.0 / std::sqrt(2.0 + 2.0 * (k1 * k1 + k2 * k2));
    CHECK(t.f == doctest::Approx(std::sqrt(2.0) * w));
    CHECK(t.l == doctest::Approx(2.0 * k1 * w / std::sqrt(2.0)));
    CHECK(t.s == doctest::Approx(2.0 * k2 * w / std::sqrt(2.0)));
  }
  const GridChart c = chart(8);
  const FamilyTriple t = h2_family(1.0, 0.0);
  const ACSField j = torus_family(ScalarField::constant(c, t.f), ScalarField::constant(c, t.l),
                                  ScalarField::constant(c, t.s)).j;
  CHECK(h_minus(MetricField::flat(c), j).kernel_dim == 2);
}

TEST_CASE("rank of function spans") {
  const GridChart c = chart(6);
  const ScalarField zero = ScalarField::constant(c, 0.0);
  CHECK(rank_span({zero, zero}) == 0);
  CHECK(rank_span({ScalarField::constant(c, 1.0), wave(c, 1.0, 0, true)}) == 2);
  CHECK(rank_span({wave(c, 1.0, 2, true), wave(c, 3.0, 2, true)}) == 1);
}

TEST_CASE("bumps are compactly supported") {
  const GridChart c = chart(8);
  const ScalarField b = bump(c, Eigen::Vector4d(0.5, 0.5, 0.5, 0.5), 0.3, 2.0);
  CHECK(b.values.maxCoeff() == doctest::Approx(2.0));
  CHECK(b.values.minCoeff() == 0.0);
  CHECK(b.values[0] == 0.0);
}
