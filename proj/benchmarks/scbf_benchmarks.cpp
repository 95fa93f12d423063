#include <benchmark/benchmark.h>

#include "scbf/certificates.hpp"
#include "scbf/compensators.hpp"
#include "scbf/experiments.hpp"
#include "scbf/rng.hpp"
#include "scbf/sde_sim.hpp"

namespace {

using namespace scbf;

struct HalfLine {
  HalfLineParams p = derive_half_line_params(1.0, 1.0, 0.1, 1.0);
  ControlAffineSDE sys = single_integrator(0.1, constant_pre_input(-1.0));
  Compensator phi = half_line_compensator(p, constant_pre_input(-1.0));
  SafeSet safe{half_line_fields(p).h, p.mu};
};

void BM_PathRngNormal(benchmark::State& state) {
  PathRng rng(1, 2);
  for (auto _ : state) benchmark::DoNotOptimize(rng.normal());
}
BENCHMARK(BM_PathRngNormal);

void BM_EulerMaruyamaStep(benchmark::State& state) {
  HalfLine e;
  Vector x = scalar_vector(1.1);
  const Vector dW = scalar_vector(0.01);
  for (auto _ : state) {
    benchmark::DoNotOptimize(euler_maruyama_step(e.sys, e.phi, x, 1e-3, dW));
  }
}
BENCHMARK(BM_EulerMaruyamaStep);

void BM_SimulatePath(benchmark::State& state) {
  HalfLine e;
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.horizon = static_cast<double>(state.range(0)) * cfg.dt;
  cfg.record_stride = 1000;
  std::uint64_t index = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_path(e.sys, e.phi, scalar_vector(4.0), e.safe, cfg, index++));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulatePath)->Arg(1000)->Arg(10000);

void BM_IntervalCompensator(benchmark::State& state) {
  const auto p = derive_interval_params(0.0, 1.0, 0.01, 1.0);
  const auto phi = interval_compensators(p, constant_pre_input(1.0)).saturated;
  double x = -0.9999;
  for (auto _ : state) {
    benchmark::DoNotOptimize(phi(scalar_vector(x)));
    x = x > 0.9999 ? -0.9999 : x + 1e-4;
  }
}
BENCHMARK(BM_IntervalCompensator);

void BM_CertificateGrid(benchmark::State& state) {
  const auto cfg = default_config("example1");
  const PlantSetup s = build_plant(cfg, "example1");
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_as_rcbf(s.sys, s.min_norm, s.reciprocal, s.gamma, s.interior_grid));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(s.interior_grid.size()));
}
BENCHMARK(BM_CertificateGrid);

}  // namespace

BENCHMARK_MAIN();
