// Microbenchmarks for the per-step kernels. Run manually:
//   ./build/benchmarks/kslab_bench --benchmark_min_time=0.2

#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdint>

#include "kslab/certificate.hpp"
#include "kslab/elliptic.hpp"
#include "kslab/model.hpp"
#include "kslab/stepper_u.hpp"
#include "kslab/stepper_w.hpp"
#include "kslab/transform.hpp"

namespace {

using namespace kslab;

ModelParams bench_params() {
  return ModelParams::make(1.0, 2.0, 2.0, 1.0, CoefficientFn::constant(0.1),
                           CoefficientFn::power(1.0, 2.0));
}

FieldU bump(const RadialGrid& grid) {
  FieldU u(grid.n_nodes());
  for (std::size_t j = 0; j < grid.r.size(); ++j) {
    u[j] = 4.0 * std::exp(-4.0 * grid.r[j] * grid.r[j]);
  }
  return u;
}

void bm_forward_transform(benchmark::State& state) {
  const auto grid = RadialGrid::make(static_cast<int>(state.range(0)), 1.0);
  const auto u = bump(grid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(forward_transform(grid, u));
  }
}

void bm_recover_u(benchmark::State& state) {
  const auto grid = RadialGrid::make(static_cast<int>(state.range(0)), 1.0);
  const auto w = forward_transform(grid, bump(grid));
  for (auto _ : state) {
    benchmark::DoNotOptimize(recover_u(grid, w));
  }
}

void bm_solve_vr(benchmark::State& state) {
  const auto grid = RadialGrid::make(static_cast<int>(state.range(0)), 1.0);
  const auto w = forward_transform(grid, bump(grid));
  const double m = total_mass(w);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_vr(grid, w, m));
  }
}

void bm_rhs_u(benchmark::State& state) {
  const auto grid = RadialGrid::make(static_cast<int>(state.range(0)), 1.0);
  const auto params = bench_params();
  const auto s = make_state_u(grid, bump(grid));
  for (auto _ : state) {
    benchmark::DoNotOptimize(rhs_u(s, params, grid));
  }
}

void bm_step_u(benchmark::State& state) {
  const auto grid = RadialGrid::make(static_cast<int>(state.range(0)), 1.0);
  const auto params = bench_params();
  const auto controls = StepControls{}.resolved(1.0);
  auto s = make_state_u(grid, bump(grid));
  const auto fresh = s;
  for (auto _ : state) {
    benchmark::DoNotOptimize(step_u(s, params, grid, 1e-6, controls));
    s = fresh;
  }
}

void bm_rhs_w(benchmark::State& state) {
  const auto grid = RadialGrid::make(static_cast<int>(state.range(0)), 1.0);
  const auto params = bench_params();
  const auto s = make_state_w(grid, forward_transform(grid, bump(grid)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(rhs_w(s, params, grid));
  }
}

void bm_step_w(benchmark::State& state) {
  const auto grid = RadialGrid::make(static_cast<int>(state.range(0)), 1.0);
  const auto params = bench_params();
  const auto controls = StepControls{}.resolved(1.0);
  auto s = make_state_w(grid, forward_transform(grid, bump(grid)));
  const auto fresh = s;
  for (auto _ : state) {
    benchmark::DoNotOptimize(step_w(s, params, grid, 1e-6, controls));
    s = fresh;
  }
}

void bm_moment_phi(benchmark::State& state) {
  const auto grid = RadialGrid::make(static_cast<int>(state.range(0)), 1.0);
  const auto w = forward_transform(grid, bump(grid));
  const MomentConfig cfg{0.25, 2.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(moment_phi(grid, w, cfg));
  }
}

}  // namespace

BENCHMARK(bm_forward_transform)->Arg(256)->Arg(1024)->Arg(4096);
BENCHMARK(bm_recover_u)->Arg(256)->Arg(1024)->Arg(4096);
BENCHMARK(bm_solve_vr)->Arg(256)->Arg(1024)->Arg(4096);
BENCHMARK(bm_rhs_u)->Arg(256)->Arg(1024)->Arg(4096);
BENCHMARK(bm_step_u)->Arg(256)->Arg(1024)->Arg(4096);
BENCHMARK(bm_rhs_w)->Arg(256)->Arg(1024)->Arg(4096);
BENCHMARK(bm_step_w)->Arg(256)->Arg(1024)->Arg(4096);
BENCHMARK(bm_moment_phi)->Arg(256)->Arg(1024)->Arg(4096);

BENCHMARK_MAIN();
