#include <doctest.h>

#include <cmath>
#include <numbers>

#include "acslab/calabi_yau.hpp"
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

TwoFormValue std_omega() { return fundamental_form(MetricValue::euclidean(), ACSValue::standard()); }

ACSField perturbed(const GridChart& c, double t) {
  const ScalarField l = ScalarField::sample(c, [t](const Eigen::Vector4d& x) { return 0.1 * t * std::cos(kTwoPi * x[0]); });
  const ScalarField s = ScalarField::sample(c, [t](const Eigen::Vector4d& x) { return 0.1 * t * std::sin(kTwoPi * x[1]); });
  ScalarField f = l;
  f.values = (1.0 - l.values.array().square() - s.values.array().square()).sqrt();
  return torus_family(f, l, s).j;
}

}  // namespace

TEST_CASE("projection onto anti-invariant forms") {
  const GridChart c = chart(6);
  const ACSField j = ACSField::standard(c);
  CHECK(pi_tensor(j, FormField::constant(c, std_omega())).max_abs() < 1e-15);
  const FormField beta = FormField::constant(c, flat_beta());
  CHECK((pi_tensor(j, beta) - beta).max_abs() < 1e-15);
}

TEST_CASE("reference problem is a fixed point") {
  const GridChart c = chart(6);
  const TypeDProblem p = make_type_d_problem(ACSField::standard(c), std_omega(), ACSValue::standard(),
                                             ScalarField::constant(c, 0.0));
  CHECK(p.chi.size() == 2);
  CHECK(phi_residual(FormField::zero(c, 1), {0.0, 0.0}, p).max_abs() == 0.0);
  const CYSolution s = solve_type_D(p);
  CHECK(s.iterations == 0);
  CHECK(s.b.max_abs() == 0.0);
  CHECK(s.scale == 0.0);
  CHECK((s.omega - p.omega_ref).max_abs() == 0.0);
  CHECK(taming_margin(s.omega, p.j) == doctest::Approx(1.0));
}

TEST_CASE("perturbed structure gives an anti-invariant dominated residual") {
  const GridChart c = chart(8);
  const ACSField j = perturbed(c, 1.0);
  const TypeDProblem p = make_type_d_problem(j, std_omega(), ACSValue::standard(), ScalarField::constant(c, 0.0));
  const FormField r = phi_residual(FormField::zero(c, 1), {0.0, 0.0}, p);
  CHECK(r.max_abs() > 1e-3);
  CHECK(pi_tensor(j, r).max_abs() > 0.5 * r.max_abs());
}

TEST_CASE("scaling the reference class changes only the volume term") {
  const GridChart c = chart(6);
  const TypeDProblem p = make_type_d_problem(ACSField::standard(c), std_omega(), ACSValue::standard(),
                                             ScalarField::constant(c, 0.0));
  const FormField r = phi_residual(FormField::zero(c, 1), {0.0, 0.0}, p, 0.1);
  CHECK((r - std::log(1.21) * 0.5 * p.omega_ref).max_abs() < 1e-14);
}

TEST_CASE("mismatched reference pair is rejected") {
  const GridChart c = chart(6);
  CHECK_THROWS_AS(make_type_d_problem(ACSField::standard(c), flat_beta() * std::sqrt(2.0), ACSValue::standard(),
                                      ScalarField::constant(c, 0.0)),
                  Error);
}

TEST_CASE("linearized operator") {
  const GridChart c = chart(8);
  const MetricField g = MetricField::flat(c);
  CHECK(linearized_solve(ScalarField::constant(c, 0.0), FormField::zero(c, 2), g).max_abs() == 0.0);

  FormField a = FormField::zero(c, 1);
  a.components[0] = ScalarField::sample(c, [](const Eigen::Vector4d& x) { return std::sin(kTwoPi * x[1]); }).values;
  a.components[2] =
      ScalarField::sample(c, [](const Eigen::Vector4d& x) { return 0.5 * std::cos(kTwoPi * (x[0] + x[3])); }).values;
  const ScalarField rhs0 = codiff(a, g).component(0);
  const FormField da = ext_d(a);
  const FormField rhs2 = 0.5 * (da + hodge_star(da, g));
  const FormField back = linearized_solve(rhs0, rhs2, g);
  CHECK((back - a).max_abs() < 1e-9);

  CHECK_THROWS_AS(linearized_solve(ScalarField::constant(c, 0.0), FormField::constant(c, flat_beta()), g), Error);
  CHECK_THROWS_AS(linearized_solve(ScalarField::constant(c, 1.0), FormField::zero(c, 2), g), Error);
  CHECK_THROWS_AS(linearized_solve(ScalarField::constant(c, 0.0), da, g), Error);
}

TEST_CASE("prescribed volume form on the flat torus") {
  const GridChart c = chart(12);
  const ScalarField F = ScalarField::sample(c, [](const Eigen::Vector4d& x) { return 0.1 * std::cos(kTwoPi * x[0]); });
  const TypeDProblem p = make_type_d_problem(ACSField::standard(c), std_omega(), ACSValue::standard(), F);
  const CYSolution s = solve_type_D(p);
  CHECK(s.iterations <= 10);
  CHECK(s.residual_history.back() < 1e-8);
  CHECK(s.volume_defect < 1e-6);
  CHECK(s.closedness_defect < 1e-10);
  CHECK(s.gauge_defect < 1e-8);
  // ω² = e^F ω̃² pointwise, checked through the Pfaffian.
  double worst = 0.0;
  for (std::size_t x = 0; x < c.points(); ++x) {
    worst = std::max(worst, std::abs(pfaffian(s.omega.two_form_at(x)) - std::exp(p.F.values[x])));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("compatible form for a perturbed structure") {
  const GridChart c = chart(12);
  const TypeDProblem p =
      make_type_d_problem(perturbed(c, 1.0), std_omega(), ACSValue::standard(), ScalarField::constant(c, 0.0));
  const CYSolution s = solve_type_D(p);
  CHECK(s.compatibility_defect < 1e-8);
  CHECK(s.taming_margin > 0.0);
  CHECK(s.closedness_defect < 1e-10);
}

TEST_CASE("off-diagonal reference class for a perturbed structure") {
  const GridChart c = chart(16);
  const TwoFormValue ray = kahler_rays(ACSValue::standard())[2];
  const TypeDProblem p = make_type_d_problem(perturbed(c, 1.0), ray, ACSValue::standard(), ScalarField::constant(c, 0.0));
  const CYSolution s = solve_type_D(p);
  CHECK(s.compatibility_defect < 1e-8);
  CHECK(s.volume_defect < 1e-6);
  CHECK(s.taming_margin > 0.0);
  // ∫ω² depends only on the class: (1+c)²∫ω̃² + Σsᵢ² = ∫ω̃².
  const double v = 2.0 * pfaffian(ray) * c.volume();
  double lhs = (1.0 + s.scale) * (1.0 + s.scale) * v;
  for (double si : s.s) lhs += si * si;
  CHECK(lhs == doctest::Approx(v).epsilon(1e-9));
  CHECK(std::abs(s.s[0]) + std::abs(s.s[1]) > 1e-3);
}

TEST_CASE("constant path keeps the counts and solves every ray") {
  const GridChart c = chart(6);
  const auto rays = kahler_rays(ACSValue::standard());
  CHECK(rays.size() == 4);
  const SemicontinuityReport r = semicontinuity_experiment(
      {0.5}, [&](double) { return ACSField::standard(c); }, ACSValue::standard(), rays);
  CHECK(r.base_h_minus == 2);
  CHECK(r.base_h_plus == 4);
  REQUIRE(r.samples.size() == 1);
  CHECK(r.samples[0].h_minus == 2);
  CHECK(r.samples[0].all_solved);
  CHECK(r.samples[0].class_rank == 4);
  CHECK(r.samples[0].inequalities_hold);
}
