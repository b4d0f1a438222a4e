#include <vector>

#include <benchmark/benchmark.h>

#include "mimocov/analytic.hpp"
#include "mimocov/insights.hpp"
#include "mimocov/mcsim.hpp"
#include "mimocov/series.hpp"
#include "mimocov/specfun.hpp"

namespace {

using namespace mimocov;

Bundle make(NetworkKind kind, int M, double lambda) {
  NetworkScenario s;
  s.kind = kind;
  s.lambda = lambda;
  if (kind == NetworkKind::adhoc) s.r0 = 1.0;
  return Bundle::validate(s, {M, 1.0}, InterfererGainSpec::gamma(1.0, 1.0));
}

void BM_SeriesExp(benchmark::State& state) {
  std::vector<double> t(state.range(0), 0.1);
  t[0] = -1.0;
  const SeriesM s(t);
  for (auto _ : state) benchmark::DoNotOptimize(series_exp(s));
}
BENCHMARK(BM_SeriesExp)->Arg(16)->Arg(64)->Arg(512);

void BM_ToeplitzExp(benchmark::State& state) {
  std::vector<double> t(state.range(0), 0.1);
  t[0] = -1.0;
  const SeriesM s(t);
  for (auto _ : state) benchmark::DoNotOptimize(toeplitz_exp_nilpotent(s));
}
BENCHMARK(BM_ToeplitzExp)->Arg(16)->Arg(64);

void BM_Hyp2f1(benchmark::State& state) {
  double z = -0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(specfun::hyp2f1(3.0, 2.5, 3.5, z));
    z = z < -50.0 ? -0.5 : z * 1.1;
  }
}
BENCHMARK(BM_Hyp2f1);

void BM_Hyp1f1(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(specfun::hyp1f1(3.5, 4.5, -12.0));
}
BENCHMARK(BM_Hyp1f1);

void BM_CellularCoverage(benchmark::State& state) {
  const Bundle b = make(NetworkKind::cellular, static_cast<int>(state.range(0)), 1e-3);
  for (auto _ : state) benchmark::DoNotOptimize(coverage(b));
}
BENCHMARK(BM_CellularCoverage)->Arg(1)->Arg(16)->Arg(128);

void BM_AdhocCoverage(benchmark::State& state) {
  const Bundle b = make(NetworkKind::adhoc, static_cast<int>(state.range(0)), 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(coverage(b));
}
BENCHMARK(BM_AdhocCoverage)->Arg(1)->Arg(16)->Arg(128);

void BM_PbarClosedForm(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(pbar_closed_form(2.0, 0.5, 30));
}
BENCHMARK(BM_PbarClosedForm);

void BM_MonteCarloCellular(benchmark::State& state) {
  const Bundle b = make(NetworkKind::cellular, 2, 1e-3);
  SimConfig cfg;
  cfg.trials = 10000;
  cfg.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(simulate(b, cfg));
  state.SetItemsProcessed(state.iterations() * cfg.trials);
}
BENCHMARK(BM_MonteCarloCellular)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
