#include <benchmark/benchmark.h>

#include "lagvac/solver.hpp"
#include "lagvac/verify.hpp"

using namespace lagvac;

namespace {

Exec policy(const benchmark::State& state) { return state.range(1) == 0 ? Exec::serial : Exec::parallel; }

void BM_Deformation(benchmark::State& state) {
  const auto n3 = static_cast<std::size_t>(state.range(0));
  const GridSpec g = GridSpec::slab(n3 / 4, n3 / 4, n3);
  const VectorField eta = verify::perturbed_identity(g);
  for (auto _ : state) benchmark::DoNotOptimize(compute_deformation(eta, policy(state)));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * g.size()));
}

void BM_Partial(benchmark::State& state) {
  const auto n3 = static_cast<std::size_t>(state.range(0));
  const GridSpec g = GridSpec::slab(n3 / 4, n3 / 4, n3);
  const VectorField eta = verify::perturbed_identity(g);
  std::vector<double> out(g.size());
  for (auto _ : state) {
    kernels::partial(eta[2], g, 2, out, policy(state));
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * g.size()));
}

void BM_Coefficients(benchmark::State& state) {
  const auto n3 = static_cast<std::size_t>(state.range(0));
  const GridSpec g = GridSpec::slab(n3 / 4, n3 / 4, n3);
  FlowState s = FlowState::identity(g);
  s.eta = verify::perturbed_identity(g);
  const WeightField w = make_weight(WeightProfile::parabolic(), g);
  const ThermoParams p = ThermoParams::make(1.5, 0.5);
  const DeformationData d = compute_deformation(s);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_coefficients(s, d, w, p, policy(state)));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * g.size()));
}

void BM_PlanarRun(benchmark::State& state) {
  SolverConfig c;
  c.n3 = static_cast<std::size_t>(state.range(0));
  c.t_end = 0.1;
  c.energy_reports = false;
  c.exec = policy(state);
  for (auto _ : state) benchmark::DoNotOptimize(run(c));
}

}  // namespace

BENCHMARK(BM_Deformation)->ArgsProduct({{64, 128}, {0, 1}})->ArgNames({"n3", "parallel"})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Partial)->ArgsProduct({{64, 128}, {0, 1}})->ArgNames({"n3", "parallel"})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Coefficients)->ArgsProduct({{64, 128}, {0, 1}})->ArgNames({"n3", "parallel"})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PlanarRun)->ArgsProduct({{512}, {0, 1}})->ArgNames({"n3", "parallel"})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
