#include <benchmark/benchmark.h>

#include "eei/applications.hpp"
#include "eei/construct.hpp"
#include "eei/grid_density.hpp"
#include "eei/oracle.hpp"
#include "eei/variational.hpp"
#include "support.hpp"

using namespace eei;

namespace {

struct Pair {
  CovMatrix a, b, c;
};

Pair random_triple(Eigen::Index n) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(n));
  return {eei::testing::random_pd(rng, n), eei::testing::random_pd(rng, n),
          eei::testing::random_pd(rng, n)};
}

void BM_Simdiag(benchmark::State& state) {
  const Pair p = random_triple(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(simdiag(p.a, p.b));
}
BENCHMARK(BM_Simdiag)->RangeMultiplier(2)->Range(2, 64);

void BM_ConstructL(benchmark::State& state) {
  const Pair p = random_triple(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(construct_l(p.a, p.b, 2.5));
}
BENCHMARK(BM_ConstructL)->RangeMultiplier(2)->Range(2, 64);

void BM_ConstructK(benchmark::State& state) {
  const Pair p = random_triple(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(construct_k(p.a, p.b, 2.5));
}
BENCHMARK(BM_ConstructK)->RangeMultiplier(2)->Range(2, 64);

void BM_OptimumThm4(benchmark::State& state) {
  const Pair p = random_triple(state.range(0));
  const EEIInstance in(2.5, p.a, p.b, p.c);
  for (auto _ : state) benchmark::DoNotOptimize(eei_optimum_thm4(in));
}
BENCHMARK(BM_OptimumThm4)->DenseRange(1, 4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_GaussianSearch(benchmark::State& state) {
  const Pair p = random_triple(3);
  const EEIInstance in(2.5, p.a, p.b, p.c);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gaussian_search(in, state.range(0), 42));
  }
}
BENCHMARK(BM_GaussianSearch)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_ConvolveDensity(benchmark::State& state) {
  const GridDensity d = GridDensity::mixture(0.5, -1, 0.5, 1, 0.5,
                                             static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(convolve_density(d, 1.0));
}
BENCHMARK(BM_ConvolveDensity)->Arg(1001)->Arg(4001)->Unit(benchmark::kMillisecond);

void BM_EntropyQuadrature(benchmark::State& state) {
  const GridDensity d = GridDensity::gaussian(0, 1, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(entropy_quadrature(d));
}
BENCHMARK(BM_EntropyQuadrature)->Arg(4001)->Arg(40001);

void BM_SecondVariation(benchmark::State& state) {
  const GridDensity fx = GridDensity::gaussian(0, 1, static_cast<std::size_t>(state.range(0)));
  const GridDensity fv = GridDensity::tabulate_step(-8, 8, fx.step(), [](double t) {
    return normal_pdf(t, 0, 1);
  });
  const GridDensity fy = convolve_densities(fx, fv);
  const SecondVariation form(fx, fy, fv, 2.0);
  const auto hx = admissible_perturbation(fx, 1, 0);
  const auto hy = admissible_perturbation(fy, 1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(form.evaluate(hx, hy, -0.5));
}
BENCHMARK(BM_SecondVariation)->Arg(1001)->Arg(4001)->Unit(benchmark::kMillisecond);

void BM_BroadcastDesign(benchmark::State& state) {
  const Pair p = random_triple(state.range(0));
  const CovMatrix z2(p.a.matrix() + p.b.matrix());
  const CovMatrix r = CovMatrix::identity(state.range(0)).scaled(0.5 * p.a.min_eigenvalue());
  const BroadcastInstance in(p.a, z2, r);
  for (auto _ : state) benchmark::DoNotOptimize(design_private_message(in));
}
BENCHMARK(BM_BroadcastDesign)->Arg(2)->Arg(8);

}  // namespace
BENCHMARK_MAIN();
