#include <benchmark/benchmark.h>

#include "ise/dial_select.hpp"
#include "ise/glm.hpp"
#include "ise/rng.hpp"
#include "ise/shrink.hpp"
#include "ise/sim.hpp"

namespace {

struct Fixture {
  ise::SimConfig config;
  ise::SimCell cell;
  ise::Dataset target;
  ise::MleFit fit;

  explicit Fixture(ise::Setting setting)
      : config(ise::SimConfig::defaults(setting)),
        cell(ise::build_cell(config)),
        target(make_target()),
        fit(ise::fit_mle(cell.family, target)) {}

  ise::Dataset make_target() {
    auto rng = ise::CounterRng::stream(ise::replicate_seed(config.master_seed, 0), 1);
    return ise::generate_target(config, cell, rng);
  }
};

void BM_FitMleGaussian(benchmark::State& state) {
  Fixture f(ise::Setting::I);
  for (auto _ : state) benchmark::DoNotOptimize(ise::fit_mle(f.cell.family, f.target));
}
BENCHMARK(BM_FitMleGaussian);

void BM_FitMleLogistic(benchmark::State& state) {
  Fixture f(ise::Setting::II);
  for (auto _ : state) benchmark::DoNotOptimize(ise::fit_mle(f.cell.family, f.target));
}
BENCHMARK(BM_FitMleLogistic);

void BM_NewtonLogistic(benchmark::State& state) {
  Fixture f(ise::Setting::II);
  const auto& src = f.cell.summaries.front();
  for (auto _ : state) {
    benchmark::DoNotOptimize(ise::solve_dial_estimate(f.cell.family, f.target, f.fit, src, 0.5));
  }
}
BENCHMARK(BM_NewtonLogistic);

void BM_SelectLambdaGaussian(benchmark::State& state) {
  Fixture f(ise::Setting::I);
  const ise::GaussianMseCurve curve(f.fit, f.cell.summaries.front());
  for (auto _ : state) benchmark::DoNotOptimize(ise::select_lambda(curve));
}
BENCHMARK(BM_SelectLambdaGaussian);

void BM_SelectLambdaLogistic(benchmark::State& state) {
  Fixture f(ise::Setting::II);
  const ise::GlmAmseCurve curve(f.cell.family, f.fit, f.cell.summaries.front());
  for (auto _ : state) benchmark::DoNotOptimize(ise::select_lambda(curve));
}
BENCHMARK(BM_SelectLambdaLogistic);

}  // namespace

BENCHMARK_MAIN();
