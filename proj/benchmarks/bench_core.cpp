#include <benchmark/benchmark.h>

#include "softphoton/amplitudes.hpp"
#include "softphoton/models.hpp"

using namespace softphoton;

namespace {

const QuadratureGrid& grid() {
  static const QuadratureGrid g = default_grid(Dispersion(0.1), FormFactor(1.0));
  return g;
}

ModelSpec spec(Family f) {
  ModelSpec s;
  s.family = f;
  s.kin.v = {0.3, 0.1, -0.2};
  return s;
}

void BM_IntegrateI3(benchmark::State& state) {
  const Dispersion disp(0.1);
  const FormFactor ff(1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate(grid(), [&](const Vec3& k) {
      const double w = disp.omega(k);
      const double r = ff(k);
      return r * r / (w * w * w);
    }));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(grid().size()));
}
BENCHMARK(BM_IntegrateI3)->Unit(benchmark::kMillisecond);

void BM_GridBuild(benchmark::State& state) {
  const auto spec = GridSpec::defaults_for(Dispersion(0.1), FormFactor(1.0));
  for (auto _ : state) benchmark::DoNotOptimize(QuadratureGrid(spec).size());
}
BENCHMARK(BM_GridBuild)->Unit(benchmark::kMillisecond);

void BM_OverlapExponent(benchmark::State& state) {
  const auto family = static_cast<Family>(state.range(0));
  const ModelSpec base = spec(family);
  for (auto _ : state) {
    benchmark::DoNotOptimize(overlap_exponent(base, {0.3, 0.0, 0.1}, {-0.2, 0.2, 0.0}, grid()).value);
  }
  state.SetLabel(to_string(family));
}
BENCHMARK(BM_OverlapExponent)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_Counterterm(benchmark::State& state) {
  const auto kind = static_cast<CountertermKind>(state.range(0));
  const ModelSpec s = spec(Family::BN_F);
  for (auto _ : state) benchmark::DoNotOptimize(counterterm_value(kind, s, grid()));
  state.SetLabel(to_string(kind));
}
BENCHMARK(BM_Counterterm)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_CancellationScan(benchmark::State& state) {
  const auto ladder = geometric_ladder(0.01, 0.01 / 128, 8);
  const ModelSpec s = spec(Family::BN_F);
  for (auto _ : state) benchmark::DoNotOptimize(cancellation_scan(s, ladder, grid()));
}
BENCHMARK(BM_CancellationScan)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
