#include <doctest.h>

#include "acslab/anti_invariant.hpp"
#include "acslab/errors.hpp"
#include "acslab/lie_model.hpp"

using namespace acslab;

namespace {

forms::Coeffs unit(int dim, int k) {
  forms::Coeffs v = forms::Coeffs::Zero(dim);
  v[k] = 1.0;
  return v;
}

int dim_of(int p) { return p == 0 || p == 4 ? 1 : (p == 2 ? 6 : 4); }

// Betti number by ranks of d assembled one basis form at a time.
int brute_betti(const LieAlgebraModel& m, int p) {
  auto rank_from = [&](int q) {
    if (q < 0 || q > 3) return 0;
    Eigen::MatrixXd d(dim_of(q + 1), dim_of(q));
    for (int k = 0; k < dim_of(q); ++k) d.col(k) = ce_d(m, {q, unit(dim_of(q), k)}).coeffs;
    return static_cast<int>(Eigen::FullPivLU<Eigen::MatrixXd>(d).rank());
  };
  return dim_of(p) - rank_from(p) - rank_from(p - 1);
}

}  // namespace

TEST_CASE("three-step differentials") {
  const Preset p = preset("three-step");
  const InvariantForm de3 = ce_d(p.model, {1, unit(4, 2)});
  CHECK((de3.coeffs - unit(6, 2)).norm() == 0.0);
  CHECK(ce_d(p.model, {2, unit(6, 1)}).coeffs.norm() == 0.0);
  // d(e3∧e4) = e14∧e4 − e3∧e12 = −e123.
  const InvariantForm d34 = ce_d(p.model, {2, unit(6, 5)});
  CHECK((d34.coeffs + unit(4, 0)).norm() == 0.0);
}

TEST_CASE("invariant Betti numbers against a brute-force rank") {
  for (const char* name : {"abelian", "kodaira", "three-step"}) {
    const Preset p = preset(name);
    for (int k = 0; k <= 4; ++k) CHECK(invariant_cohomology(p.model, k).betti == brute_betti(p.model, k));
  }
  CHECK(invariant_cohomology(preset("three-step").model, 1).betti == 2);
  CHECK(invariant_cohomology(preset("three-step").model, 2).betti == 2);
  CHECK(invariant_cohomology(preset("kodaira").model, 1).betti == 3);
  CHECK(invariant_cohomology(preset("abelian").model, 2).betti == 6);
}

TEST_CASE("invariant h-minus and h-plus") {
  const Preset k = preset("kodaira");
  const InvariantHpm hk = invariant_h_pm(k.model, k.j, k.g);
  CHECK(hk.h_minus == 2);
  CHECK(hk.b_plus == 2);
  CHECK(hk.h_minus_alt == 2);
  CHECK(hk.h_plus + hk.h_minus == 4);
  const TameVerdict tv = tame_verdict(hk.b_plus, hk.h_minus, false);
  CHECK(tv.difference == 0);
  CHECK_FALSE(tv.met);

  const Preset t = preset("three-step");
  const InvariantHpm ht = invariant_h_pm(t.model, t.j, t.g);
  CHECK(ht.h_minus == 1);
  CHECK(ht.b_plus == 1);
  CHECK(ht.h_minus_alt == 1);

  const Preset a = preset("abelian");
  const InvariantHpm ha = invariant_h_pm(a.model, a.j, a.g);
  CHECK(ha.h_minus == 2);
  CHECK(ha.b_plus == 3);
}

TEST_CASE("Kodaira family counts") {
  const LieAlgebraModel m = preset("kodaira").model;
  CHECK(kodaira_family_h(m, 1.0, 0.0, 0.0).predicted == 2);
  CHECK(kodaira_family_h(m, 1.0, 0.0, 0.0).measured == 2);
  const double f = std::sqrt(1.0 - 0.36);
  CHECK(kodaira_family_h(m, f, 0.6, 0.0).predicted == 1);
  CHECK(kodaira_family_h(m, f, 0.6, 0.0).measured == 1);
  CHECK_THROWS_AS(kodaira_family_h(m, 1.0, 1.0, 0.0), Error);
}

TEST_CASE("Nijenhuis images") {
  CHECK(nijenhuis_invariant(preset("abelian").model, ACSValue::standard()).image_basis.empty());
  const Preset k = preset("kodaira");
  CHECK(nijenhuis_invariant(k.model, k.j).image_basis.empty());
  const Preset t = preset("three-step");
  const NijenhuisData n = nijenhuis_invariant(t.model, t.j);
  REQUIRE(n.image_basis.size() == 2);
  for (const auto& v : n.image_basis) CHECK(v.head<2>().norm() == 0.0);
}

TEST_CASE("three-step Lee form and well-balanced residuals are exact") {
  const Preset t = preset("three-step");
  CHECK(invariant_lee_form(t.model, t.j, t.g) == Eigen::Vector4d(0, 0, -1, 0));
  const WellBalancedResiduals wb = invariant_well_balanced(t.model, t.j, t.g);
  CHECK(wb.res_iii == 0.0);
  CHECK(wb.res_iv == 0.0);
  CHECK(wb.res_v == 0.0);
}

TEST_CASE("model parsing and validation") {
  const LieAlgebraModel m = LieAlgebraModel::parse("de1 = 0\nde2 = 0\nde3 = -1/2 e12 # comment\nde4 = e13\n");
  CHECK(satisfies_jacobi(m));
  CHECK(is_nilpotent(m));
  CHECK(LieAlgebraModel::parse(m.to_text()).to_text() == m.to_text());
  CHECK_THROWS_AS(LieAlgebraModel::parse("de1 = e2x\n"), Error);
  // de1 = e12 is not nilpotent.
  CHECK_THROWS_AS(LieAlgebraModel::parse("de1 = e12\nde2 = 0\nde3 = 0\nde4 = 0\n"), Error);
  CHECK_THROWS_AS(preset("heisenberg"), Error);
}
