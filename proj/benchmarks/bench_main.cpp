#include <benchmark/benchmark.h>

#include "weakkam/characteristics.hpp"
#include "weakkam/random.hpp"

using namespace weakkam;

namespace {

const HamiltonianSpec kPendulum = HamiltonianSpec::mechanical(1.0, 0.5);

Grids grids_for(int n_x) { return make_grids(n_x, n_x / 4, default_v_max(kPendulum), 121); }

void BM_Step(benchmark::State& state) {
  const Grids g = grids_for(static_cast<int>(state.range(0)));
  const LaxOleinikStepper stepper(kPendulum, g);
  Lcg64 rng(1);
  ValueField u = random_lipschitz_field(g.space, rng, 1.0);
  for (auto _ : state) {
    u = stepper.step(u);
    benchmark::DoNotOptimize(u);
  }
  state.SetItemsProcessed(state.iterations() * g.space.size() * g.velocity.size());
}
BENCHMARK(BM_Step)->Arg(100)->Arg(200)->Arg(400)->Arg(800);

void BM_PeriodMap(benchmark::State& state) {
  const Grids g = grids_for(static_cast<int>(state.range(0)));
  const LaxOleinikStepper stepper(kPendulum, g);
  Lcg64 rng(1);
  const ValueField u = random_lipschitz_field(g.space, rng, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(stepper.period_map(u));
}
BENCHMARK(BM_PeriodMap)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Legendre(benchmark::State& state) {
  const HamiltonianSpec spec =
      state.range(0) == 0 ? kPendulum : HamiltonianSpec::quartic(1.0, 0.5);
  Lcg64 rng(1);
  double v = 0.0;
  for (auto _ : state) {
    v = 4.0 * uniform01(rng) - 2.0;
    benchmark::DoNotOptimize(legendre(spec, 0.3, 0.7, v));
  }
  state.SetLabel(state.range(0) == 0 ? "mechanical" : "quartic");
}
BENCHMARK(BM_Legendre)->Arg(0)->Arg(1);

void BM_Backtrack(benchmark::State& state) {
  const Grids g = grids_for(200);
  Lcg64 rng(1);
  const EvolutionTrace trace = evolve(random_lipschitz_field(g.space, rng, 1.0), kPendulum, g, 32, 32);
  const int span = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(backtrack(trace, 0.37, span));
}
BENCHMARK(BM_Backtrack)->Arg(8)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
