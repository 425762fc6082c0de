#include <benchmark/benchmark.h>

#include "rz2/rz2.hpp"

using namespace rz2;

namespace {

constexpr Endomorphism I{1.0, 1};
constexpr Endomorphism minus_I{-1.0, 1};

FormsProblem swap_problem() {
  const ThetaParams mu{1.0, 0.0, 0.5, 0.0, 0.5};
  return {{mu, mu}, {I, I}, {I, minus_I}, {I, minus_I}, {I, I}};
}

}  // namespace

static void BM_KappaBound(benchmark::State& state) {
  double beta = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(kappa_bound(1.0, beta, 0.4, -0.3));
    beta += 1e-9;
  }
}
BENCHMARK(BM_KappaBound);

static void BM_Eq1Residual(benchmark::State& state) {
  const auto p = swap_problem();
  const CharacterGrid grid{5.0, static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(eq1_residual(p, grid));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0) * 4);
}
BENCHMARK(BM_Eq1Residual)->Arg(51)->Arg(101)->Arg(201);

static void BM_VerifyElimination(benchmark::State& state) {
  const ThetaParams mu{1.0, 0.0, 0.5, 0.0, 0.5};
  const FormsProblem p({mu, mu}, {I, I}, {{2.0, 1}, {-3.0, 1}}, {{2.0, 1}, {-3.0, 1}}, {I, I});
  const auto s = p.symmetrized();
  for (auto _ : state) benchmark::DoNotOptimize(verify_elimination(s, 0, 50, 1e-9));
}
BENCHMARK(BM_VerifyElimination);

static void BM_SampleForms(benchmark::State& state) {
  const auto p = swap_problem();
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_forms(p, state.range(0), ++seed));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleForms)->Arg(1000)->Arg(5000);

static void BM_PermutationTest(benchmark::State& state) {
  const auto s = sample_forms(swap_problem(), state.range(0), 7);
  for (auto _ : state) benchmark::DoNotOptimize(permutation_test(s.first, s.second, 99, 3));
}
BENCHMARK(BM_PermutationTest)->Arg(1000)->Arg(2500)->Unit(benchmark::kMillisecond);

static void BM_PropositionCheck(benchmark::State& state) {
  const std::vector<z2::Rational> grid{z2::Rational(0), z2::Rational(1, 4), z2::Rational(1, 3),
                                       z2::Rational(1)};
  for (auto _ : state) benchmark::DoNotOptimize(z2::proposition_check(state.range(0), grid));
}
BENCHMARK(BM_PropositionCheck)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
