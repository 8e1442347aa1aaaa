#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "acslab/anti_invariant.hpp"
#include "acslab/calabi_yau.hpp"
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

FormField wave_form(const GridChart& c, int degree) {
  FormField f = FormField::zero(c, degree);
  for (std::size_t k = 0; k < f.components.size(); ++k) {
    f.components[k] = ScalarField::sample(c, [k](const Eigen::Vector4d& x) {
                        return std::sin(kTwoPi * (x[0] + static_cast<double>(k) * x[2]));
                      }).values;
  }
  return f;
}

void BM_ExteriorDerivative(benchmark::State& state) {
  const GridChart c = chart(static_cast<int>(state.range(0)));
  const FormField a = wave_form(c, 1);
  for (auto _ : state) benchmark::DoNotOptimize(ext_d(a));
}
BENCHMARK(BM_ExteriorDerivative)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_LejmiP(benchmark::State& state) {
  const GridChart c = chart(static_cast<int>(state.range(0)));
  const MetricField g = MetricField::flat(c);
  const ACSField j = ACSField::standard(c);
  const FormField psi = anti_invariant_part(wave_form(c, 2), j);
  for (auto _ : state) benchmark::DoNotOptimize(lejmi_P(psi, g, j));
}
BENCHMARK(BM_LejmiP)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_HMinusFlat(benchmark::State& state) {
  const GridChart c = chart(static_cast<int>(state.range(0)));
  const MetricField g = MetricField::flat(c);
  const ACSField j = ACSField::standard(c);
  for (auto _ : state) benchmark::DoNotOptimize(h_minus(g, j).kernel_dim);
}
BENCHMARK(BM_HMinusFlat)->Arg(8)->Unit(benchmark::kSecond)->Iterations(1);

void BM_Curvature(benchmark::State& state) {
  const GridChart c = chart(static_cast<int>(state.range(0)));
  const ScalarField u = ScalarField::sample(c, [](const Eigen::Vector4d& x) { return 0.1 * std::sin(kTwoPi * x[0]); });
  const MetricField g = MetricField::flat(c).conformal(u);
  for (auto _ : state) benchmark::DoNotOptimize(curvature(levi_civita(g), g).scalar.values.sum());
}
BENCHMARK(BM_Curvature)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_TypeD(benchmark::State& state) {
  const GridChart c = chart(static_cast<int>(state.range(0)));
  const ScalarField F = ScalarField::sample(c, [](const Eigen::Vector4d& x) { return 0.1 * std::cos(kTwoPi * x[0]); });
  const ACSValue jstd = ACSValue::standard();
  const TypeDProblem p = make_type_d_problem(ACSField::standard(c), fundamental_form(MetricValue::euclidean(), jstd), jstd, F);
  for (auto _ : state) benchmark::DoNotOptimize(solve_type_D(p).iterations);
}
BENCHMARK(BM_TypeD)->Arg(12)->Unit(benchmark::kSecond)->Iterations(1);

}  // namespace
BENCHMARK_MAIN();
