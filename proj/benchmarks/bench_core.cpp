#include <benchmark/benchmark.h>

#include <numbers>

#include "saddledyn/analysis.hpp"
#include "saddledyn/reduced.hpp"

using namespace sdyn;
using std::numbers::pi;

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

void IsdFieldDoubleWell(benchmark::State& state) {
  const EnergyModel m = make_model(ModelSpec::double_well_2d(2.0));
  const Vec x = vec2(0.31, 0.27);
  for (auto _ : state) {
    const IsdEval e = isd_field(m, x);
    benchmark::DoNotOptimize(e.field[0]);
  }
}
BENCHMARK(IsdFieldDoubleWell);

void GadFieldCycling3d(benchmark::State& state) {
  const EnergyModel m = make_model(ModelSpec::cycling_example_3d());
  Vec x(3), v(3);
  x << 0.01, 0.005, 0.002;
  v << 1, 0, 0;
  for (auto _ : state) {
    const GadDeriv d = gad_field(m, {x, v}, 0.01);
    benchmark::DoNotOptimize(d.x_dot[0]);
  }
}
BENCHMARK(GadFieldCycling3d);

void LowestPairs(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Mat h = Mat::Random(n, n);
  h = Mat(0.5 * (h + h.transpose()));
  for (auto _ : state) {
    const SpectralInfo si = lowest_pairs(h);
    benchmark::DoNotOptimize(si.gap);
  }
}
BENCHMARK(LowestPairs)->Arg(2)->Arg(3)->Arg(8)->Arg(32);

void IntegrateIsdToSaddle(benchmark::State& state) {
  const EnergyModel m = make_model(ModelSpec::double_well_2d(2.0));
  IntegratorConfig cfg;
  cfg.t_max = 20.0;
  for (auto _ : state) {
    const Trajectory t = integrate(m, Dynamics::Isd, vec2(0.3, 0.4), cfg);
    benchmark::DoNotOptimize(t.stop.tag);
  }
}
BENCHMARK(IntegrateIsdToSaddle);

void LocateNdCycling3d(benchmark::State& state) {
  Mat Hp(3, 3);
  Hp << 0.3, 0.1, 0.2, 0.1, -0.2, 0.15, 0.2, 0.15, 0.1;
  Vec bp(3);
  bp << 0.05, -0.1, 0.2;
  const EnergyModel m = make_model(ModelSpec::perturbed(
      ModelSpec::cycling_example_3d(), 0.05,
      std::make_shared<const ModelSpec>(ModelSpec::quadratic(Hp, bp))));
  for (auto _ : state) {
    const LocateResult res = locate_nd(m, Vec::Zero(3));
    benchmark::DoNotOptimize(res.status);
  }
}
BENCHMARK(LocateNdCycling3d);

void BasinCell(benchmark::State& state) {
  const EnergyModel m = make_model(ModelSpec::double_well_2d(6.0));
  IntegratorConfig cfg;
  cfg.method = StepMethod::Rk4;
  cfg.dt = 2e-3;
  cfg.t_max = 25.0;
  for (auto _ : state) {
    const Trajectory t = integrate(m, Dynamics::Isd, vec2(1.4, 0.5), cfg);
    benchmark::DoNotOptimize(t.stop.tag);
  }
}
BENCHMARK(BasinCell);

}  // namespace

BENCHMARK_MAIN();
