#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

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

ACSField wavy_structure(const GridChart& c) {
  const ScalarField l = ScalarField::sample(c, [](const Eigen::Vector4d& x) { return 0.4 * std::cos(kTwoPi * x[0]); });
  const ScalarField s = ScalarField::sample(c, [](const Eigen::Vector4d& x) { return 0.3 * std::sin(kTwoPi * x[1]); });
  ScalarField f = l;
  f.values = (1.0 - l.values.array().square() - s.values.array().square()).sqrt();
  return torus_family(f, l, s).j;
}

FormField random_form(const GridChart& c, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  FormField f = FormField::zero(c, 2);
  for (auto& comp : f.components) {
    const double a = n(rng), b = n(rng);
    comp = ScalarField::sample(c, [&](const Eigen::Vector4d& x) {
             return a + b * std::sin(kTwoPi * (x[0] - x[2]) + a);
           }).values;
  }
  return f;
}

}  // namespace

TEST_CASE("P vanishes on constant anti-invariant forms for the flat Kahler pair") {
  const GridChart c = chart(6);
  const MetricField g = MetricField::flat(c);
  const ACSField j = ACSField::standard(c);
  CHECK(lejmi_P(FormField::constant(c, flat_beta()), g, j).max_abs() < 1e-12);
  CHECK_THROWS_AS(lejmi_P(FormField::constant(c, TwoFormValue{{1, 0, 0, 0, 0, 1}}), g, j), Error);
}

TEST_CASE("P is self-adjoint and both formulas agree for a non-integrable structure") {
  const GridChart c = chart(8);
  const MetricField g = MetricField::flat(c);
  const ACSField j = wavy_structure(c);
  const FormField a = anti_invariant_part(random_form(c, 1), j);
  const FormField b = anti_invariant_part(random_form(c, 2), j);
  const FormField pa = lejmi_P(a, g, j);
  const FormField pb = lejmi_P(b, g, j);
  CHECK(std::abs(l2_inner(pa, b, g) - l2_inner(a, pb, g)) < 1e-9 * l2_norm(a, g) * l2_norm(b, g));
  CHECK((pa - lejmi_P_laplacian(a, g, j)).max_abs() < 1e-8 * std::max(1.0, pa.max_abs()));
  CHECK(l2_inner(pa, a, g) >= -1e-10);
  CHECK((invariant_part(a, j)).max_abs() < 1e-12);
}

TEST_CASE("flat standard structure: h- = 2, h+ = 4, tame difference 1") {
  const GridChart c = chart(8);
  const MetricField g = MetricField::flat(c);
  const ACSField j = ACSField::standard(c);
  const SpectralReport r = h_minus(g, j);
  CHECK(r.kernel_dim == 2);
  CHECK(r.gap_ratio >= 1e3);
  CHECK(h_minus_rank_test(g, j) == 2);
  CHECK(h_plus(g, j) == 4);
  REQUIRE(r.kernel.size() == 2);
  for (const auto& psi : r.kernel) {
    CHECK(ext_d(psi).max_abs() < 1e-7);
    CHECK((psi - hodge_star(psi, g)).max_abs() < 1e-7);
    CHECK(invariant_part(psi, j).max_abs() < 1e-7);
  }
  const TameVerdict t = tame_indicator(g, j);
  CHECK(t.difference == 1);
  CHECK(t.met);
}

TEST_CASE("tame verdicts from the counts") {
  CHECK(tame_verdict(3, 0, false).difference == 3);
  CHECK(tame_verdict(3, 0, false).met);
  CHECK_FALSE(tame_verdict(2, 2, false).met);
}

TEST_CASE("generic structure: h- = 0 and h+ = 6") {
  const GridChart c = chart(8);
  const MetricField g = MetricField::flat(c);
  const auto t = two_bump_triple(c);
  const ACSField j = torus_family(t[0], t[1], t[2]).j;
  const SpectralReport r = h_minus(g, j);
  CHECK(r.kernel_dim == 0);
  CHECK(h_minus_rank_test(g, j) == 0);
  CHECK(h_plus(g, j) + r.kernel_dim == 6);
}

TEST_CASE("constant path scans to 2 everywhere") {
  const GridChart c = chart(6);
  const MetricField g = MetricField::flat(c);
  const auto scan = path_scan({0.0, 0.5, 1.0}, [&](double) { return ACSField::standard(c); },
                              [&](const ACSField&) { return g; });
  REQUIRE(scan.size() == 3);
  for (const auto& s : scan) {
    CHECK(s.kernel_dim == 2);
    CHECK_FALSE(s.flagged);
  }
}
