#include <benchmark/benchmark.h>

#include <vector>

#include "ruinrk/kernels.hpp"
#include "ruinrk/mc.hpp"
#include "ruinrk/rk4.hpp"
#include "ruinrk/tsrk.hpp"

namespace {

using ruinrk::ExecPolicy;

std::vector<double> ramp(std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 / (1.0 + 0.001 * static_cast<double>(i));
  return v;
}

void BM_SimpsonConvolution(benchmark::State& state) {
  const auto policy = static_cast<ExecPolicy>(state.range(0));
  const auto n = static_cast<std::size_t>(state.range(1));
  const auto psi = ramp(n + 1);
  const auto ker = ramp(n + 1);
  for (auto _ : state) benchmark::DoNotOptimize(ruinrk::simpson_convolution(policy, psi, ker, 0.01));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}
BENCHMARK(BM_SimpsonConvolution)->ArgsProduct({{0, 1}, {1 << 12, 1 << 16, 1 << 20}});

void BM_RK4Pareto(benchmark::State& state) {
  const auto policy = static_cast<ExecPolicy>(state.range(0));
  const ruinrk::ModelParams model(ruinrk::ClaimDistribution::pareto_lomax(1), 0.25);
  for (auto _ : state) benchmark::DoNotOptimize(ruinrk::solve_rk4(model, 0.01, 50.0, policy).values.back());
}
BENCHMARK(BM_RK4Pareto)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_PhlPareto(benchmark::State& state) {
  const auto policy = static_cast<ExecPolicy>(state.range(0));
  const ruinrk::ModelParams model(ruinrk::ClaimDistribution::pareto_lomax(1), 0.25);
  ruinrk::TsrkOptions opt;
  opt.policy = policy;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ruinrk::solve_tsrk(model, 0.01, 50.0, ruinrk::TsrkScheme::pareto_phl, opt).values.back());
  }
}
BENCHMARK(BM_PhlPareto)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_MonteCarlo(benchmark::State& state) {
  const auto policy = static_cast<ExecPolicy>(state.range(0));
  const ruinrk::ModelParams model(ruinrk::ClaimDistribution::pareto_lomax(1), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(ruinrk::simulate_ruin(model, 10.0, 200.0, 100000, 1, policy).ruined);
}
BENCHMARK(BM_MonteCarlo)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
