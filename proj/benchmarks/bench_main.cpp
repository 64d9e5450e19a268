#include <benchmark/benchmark.h>

#include "splitkit/analysis.hpp"
#include "splitkit/burgers.hpp"
#include "splitkit/fft.hpp"
#include "splitkit/integrator.hpp"
#include "splitkit/oracle.hpp"
#include "splitkit/schemes.hpp"

namespace sk = splitkit;

static void BM_SeriesProduct(benchmark::State& state) {
  auto s = sk::registry_scheme("opt-3-3-pos");
  for (auto _ : state) benchmark::DoNotOptimize(sk::scheme_series(s, 4));
}
BENCHMARK(BM_SeriesProduct);

static void BM_Lem(benchmark::State& state) {
  auto s = sk::registry_scheme("strang-4");
  for (auto _ : state) benchmark::DoNotOptimize(sk::lem(s));
}
BENCHMARK(BM_Lem);

static void BM_DefectLongDouble(benchmark::State& state) {
  auto s = sk::registry_scheme("opt-3-3-pos");
  std::vector<std::vector<long double>> a(static_cast<std::size_t>(s.n_ops));
  for (int l = 0; l < s.n_ops; ++l)
    for (int nu = 0; nu < s.stages; ++nu)
      a[static_cast<std::size_t>(l)].push_back(sk::to_long_double(
          s.coeffs[static_cast<std::size_t>(l)][static_cast<std::size_t>(nu)]));
  for (auto _ : state)
    benchmark::DoNotOptimize(sk::log_defect_coeffs(a, s.n_ops, 3));
}
BENCHMARK(BM_DefectLongDouble);

static void BM_MatrixExp(benchmark::State& state) {
  auto p = sk::make_problem(2, static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(sk::expm(p.mats[0]));
}
BENCHMARK(BM_MatrixExp)->Arg(6)->Arg(16);

static void BM_FftDouble(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  sk::Fft<double> fft(n);
  std::vector<double> re(n, 0.0), im(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) re[i] = static_cast<double>(i % 17) - 8.0;
  for (auto _ : state) {
    fft.forward(re, im);
    fft.inverse(re, im);
    benchmark::DoNotOptimize(re.data());
  }
}
BENCHMARK(BM_FftDouble)->Arg(1024)->Arg(4096);

static void BM_BurgersStep(benchmark::State& state) {
  sk::BurgersConfig cfg = sk::study_config();
  sk::BurgersProblem prob(cfg);
  auto u0 = sk::init_bump(cfg);
  auto s = sk::registry_scheme("strang-2");
  for (auto _ : state)
    benchmark::DoNotOptimize(sk::split_step(prob, s, 0.01, u0));
}
BENCHMARK(BM_BurgersStep);

BENCHMARK_MAIN();
