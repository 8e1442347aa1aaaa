#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "acslab/errors.hpp"
#include "acslab/families.hpp"
#include "acslab/hermitian.hpp"

using namespace acslab;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

GridChart chart(int n) {
  GridChart c;
  c.resolution = n;
  return c;
}

ScalarField small_u(const GridChart& c) {
  return ScalarField::sample(
      c, [](const Eigen::Vector4d& x) { return 0.1 * std::sin(kTwoPi * x[0]) * std::cos(kTwoPi * x[1]); });
}

ACSField wavy_structure(const GridChart& c) {
  const ScalarField l = ScalarField::sample(c, [](const Eigen::Vector4d& x) { return 0.3 * std::cos(kTwoPi * x[0]); });
  const ScalarField s = ScalarField::sample(c, [](const Eigen::Vector4d& x) { return 0.2 * std::sin(kTwoPi * x[1]); });
  ScalarField f = l;
  f.values = (1.0 - l.values.array().square() - s.values.array().square()).sqrt();
  return torus_family(f, l, s).j;
}

double weyl_size(const CurvatureData& c) {
  double m = 0.0;
  for (std::size_t p = 0; p < c.w_plus.size(); ++p) {
    m = std::max(m, c.w_plus[p].cwiseAbs().maxCoeff());
    m = std::max(m, c.w_minus[p].cwiseAbs().maxCoeff());
  }
  return m;
}

}  // namespace

TEST_CASE("flat Kahler pair has no torsion") {
  const GridChart c = chart(6);
  const MetricField g = MetricField::flat(c);
  const ACSField j = ACSField::standard(c);
  CHECK(lee_form(g, j).max_abs() < 1e-13);
  CHECK(gauduchon_residual(g, j) < 1e-13);
  const GauduchonResult gr = gauduchon_gauge(g, j);
  CHECK(gr.u.values.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(nijenhuis_field(j).sup < 1e-13);
  const WellBalancedResiduals wb = well_balanced_residuals(g, j);
  CHECK(wb.res_iii < 1e-12);
  CHECK(wb.res_iv < 1e-12);
  CHECK(wb.res_v < 1e-12);
  const CurvatureData curv = curvature(levi_civita(g), g);
  CHECK(hermitian_weyl_residual(g, j, curv) < 1e-12);
}

TEST_CASE("Lee form of a conformally flat Kahler metric is 2du") {
  const GridChart c = chart(12);
  const ScalarField u = small_u(c);
  const MetricField g = MetricField::flat(c).conformal(u);
  const ACSField j = ACSField::standard(c);
  const FormField theta = lee_form(g, j);
  const FormField expected = 2.0 * ext_d(FormField::from_scalar(u));
  CHECK((theta - expected).max_abs() < 1e-8);
  CHECK(lee_residual(g, j, theta) < 1e-10);
  CHECK(gauduchon_residual(g, j) > 1e-3);
}

TEST_CASE("Gauduchon gauge undoes a conformal factor") {
  const GridChart c = chart(8);
  const ScalarField u = small_u(c);
  const MetricField g = MetricField::flat(c).conformal(u);
  const ACSField j = ACSField::standard(c);
  const GauduchonResult gr = gauduchon_gauge(g, j);
  CHECK(gr.residual < 1e-9);
  CHECK(gauduchon_residual(gr.metric, j) < 1e-9);
  const Eigen::VectorXd sum = gr.u.values + u.values;
  CHECK(sum.maxCoeff() - sum.minCoeff() < 1e-8);
}

TEST_CASE("Gauduchon gauge for a non-integrable structure") {
  const GridChart c = chart(8);
  const MetricField g = MetricField::flat(c);
  const ACSField j = wavy_structure(c);
  const GauduchonResult gr = gauduchon_gauge(g, j);
  CHECK(gr.residual < 1e-9);
  CHECK(gr.iterations <= 10);
}

TEST_CASE("constancy check") {
  const GridChart c = chart(6);
  const MetricField g = MetricField::flat(c);
  const ACSField j = ACSField::standard(c);
  const ConstancyReport r = constancy_check(FormField::constant(c, TwoFormValue{{1, 0, 0, 0, 0, 1}}), g, j);
  CHECK(r.mean == doctest::Approx(2.0));
  CHECK(r.deviation < 1e-12);
  CHECK(r.hypothesis_holds);
  const GridChart c8 = chart(8);
  const ConstancyReport bad = constancy_check(FormField::constant(c8, TwoFormValue{{1, 0, 0, 0, 0, 1}}),
                                              MetricField::flat(c8).conformal(small_u(c8)),
                                              ACSField::standard(c8));
  CHECK_FALSE(bad.hypothesis_holds);
}

TEST_CASE("Nijenhuis tensor of a deformed structure has rank 2") {
  const GridChart c = chart(8);
  const MetricField g = MetricField::flat(c);
  const ScalarField r = ScalarField::sample(c, [](const Eigen::Vector4d& x) { return 0.5 * std::cos(kTwoPi * x[0]); });
  const ACSField jt = build_from_alpha(g, ACSField::standard(c), FormField::constant(c, flat_beta()), r);
  const NijenhuisField n = nijenhuis_field(jt);
  CHECK(n.sup > 1e-2);
  CHECK(n.max_rank == 2);
  CHECK(n.invariance_defect < 1e-6 * std::max(1.0, n.sup));
}

TEST_CASE("signature constraint 5chi + 6sigma = 0") {
  CHECK(signature_constraint(0, 0));
  CHECK_FALSE(signature_constraint(4, 0));
  CHECK(signature_constraint(6, -5));
}

TEST_CASE("flat connection and curvature vanish") {
  const GridChart c = chart(6);
  const MetricField g = MetricField::flat(c);
  const ConnectionField conn = levi_civita(g);
  for (const auto& gamma : conn.gamma)
    for (const auto& m : gamma) CHECK(m.cwiseAbs().maxCoeff() < 1e-14);
  const CurvatureData curv = curvature(conn, g);
  CHECK(curv.scalar.values.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(weyl_size(curv) < 1e-12);
}

TEST_CASE("conformally flat metrics have vanishing Weyl tensor") {
  const GridChart c = chart(12);
  const MetricField g = MetricField::flat(c).conformal(small_u(c));
  const ConnectionField conn = levi_civita(g);
  CHECK(conn.compatibility_residual < 1e-10);
  CHECK(conn.symmetry_residual < 1e-12);
  const CurvatureData curv = curvature(conn, g);
  CHECK(curv.scalar.values.cwiseAbs().maxCoeff() > 0.1);
  CHECK(weyl_size(curv) < 1e-6);
  CHECK(curv.bianchi_residual < 1e-6);
  CHECK(hermitian_weyl_residual(g, ACSField::standard(c), curv) < 1e-6);
}

TEST_CASE("scalar curvature of a product of surfaces") {
  // e^{2a}(dx1² + dx2²) + dx3² + dx4² has s = −2e^{−2a}Δa, and Δa = −8π²a here.
  const GridChart c = chart(16);
  auto a = [](const Eigen::Vector4d& x) { return 0.1 * std::sin(kTwoPi * x[0]) * std::cos(kTwoPi * x[1]); };
  std::vector<Eigen::Matrix4d> values(c.points(), Eigen::Matrix4d::Identity());
  for (std::size_t p = 0; p < c.points(); ++p) {
    const double e = std::exp(2.0 * a(c.coordinates(p)));
    values[p](0, 0) = e;
    values[p](1, 1) = e;
  }
  const MetricField g = MetricField::from_values(c, values);
  const CurvatureData curv = curvature(levi_civita(g), g);
  double err = 0.0;
  for (std::size_t p = 0; p < c.points(); ++p) {
    const double av = a(c.coordinates(p));
    const double expected = 16.0 * std::numbers::pi * std::numbers::pi * av * std::exp(-2.0 * av);
    err = std::max(err, std::abs(curv.scalar.values[p] - expected));
  }
  CHECK(err < 1e-6);
}

TEST_CASE("Weitzenbock identity on the flat torus") {
  const GridChart c = chart(8);
  const MetricField g = MetricField::flat(c);
  const CurvatureData curv = curvature(levi_civita(g), g);
  const WeitzenbockReport constant = weitzenbock_residual(FormField::constant(c, flat_beta()), g, curv);
  CHECK(std::abs(constant.lhs) < 1e-12);
  CHECK(std::abs(constant.rhs) < 1e-12);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  FormField psi = FormField::zero(c, 2);
  for (auto& comp : psi.components) {
    const double k = n(rng);
    comp = ScalarField::sample(c, [&](const Eigen::Vector4d& x) { return k * std::sin(kTwoPi * (x[0] + x[3])); }).values;
  }
  CHECK(weitzenbock_residual(psi, g, curv).relative_residual < 1e-8);
}

TEST_CASE("a deformed structure is not well-balanced") {
  const GridChart c = chart(8);
  const MetricField g = MetricField::flat(c);
  const WellBalancedResiduals wb = well_balanced_residuals(g, wavy_structure(c));
  CHECK(std::max({wb.res_iii, wb.res_iv, wb.res_v}) > 1e-6);
}
