#include <benchmark/benchmark.h>

#include <vector>

#include "consensus/bounds.hpp"
#include "consensus/graph.hpp"
#include "consensus/simulation.hpp"
#include "consensus/spectral.hpp"

namespace {

using namespace consensus;

void BM_JacobiLoop(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Matrix l = laplacian(loop_graph(n, 1.0, ClassLayout::single)).entries;
  for (auto _ : state) benchmark::DoNotOptimize(symmetric_eigenvalues(l));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_JacobiLoop)->RangeMultiplier(2)->Range(4, 64)->Complexity();

void BM_SumProductNormsComplete(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const AgentGraph g = complete_graph(n, 1.0, ClassLayout::per_edge);
  for (auto _ : state) benchmark::DoNotOptimize(sum_product_norms(g).total);
  state.counters["classes"] = static_cast<double>(g.class_count());
}
BENCHMARK(BM_SumProductNormsComplete)->DenseRange(3, 9, 2)->Unit(benchmark::kMillisecond);

void BM_MarginReportLoop(benchmark::State& state) {
  const AgentGraph g = loop_graph(static_cast<std::size_t>(state.range(0)), 1.0, ClassLayout::per_edge);
  for (auto _ : state) benchmark::DoNotOptimize(margin_report(g, NormMode::spectral_radius));
}
BENCHMARK(BM_MarginReportLoop)->Arg(8)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_DecayMargin(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(margin_decay_rate(3.0, 1.5));
}
BENCHMARK(BM_DecayMargin);

// Steps per second of the delayed integrator on the triangle example.
void BM_SimulateTriangle(benchmark::State& state) {
  const std::vector<EdgeSpec> e{{1, 2, 1.0, 1}, {2, 3, 1.0, 1}, {1, 3, 1.0, 2}};
  const AgentGraph g = build_graph(3, 2, e);
  const std::vector<DelaySignal> signals{DelaySignal::constant(0.1), DelaySignal::sinusoidal(0.35, 0.35, 2.0)};
  const InitialHistory init = InitialHistory::constant(3, 2, {2, 2, 2, -2, 1, 3});
  SimulationOptions opt;
  opt.horizon = 60.0;
  opt.h_step = 1e-3;
  opt.record_stride = 100;
  for (auto _ : state) benchmark::DoNotOptimize(simulate(g, signals, init, opt).samples());
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(opt.horizon / opt.h_step));
}
BENCHMARK(BM_SimulateTriangle)->Unit(benchmark::kMillisecond);

void BM_SimulateLoop(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const AgentGraph g = loop_graph(n, 1.0, ClassLayout::per_edge);
  const std::vector<DelaySignal> signals(g.class_count(), DelaySignal::constant(0.2));
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<double>(i);
  const InitialHistory init = InitialHistory::constant(n, 1, v);
  SimulationOptions opt;
  opt.horizon = 20.0;
  opt.h_step = 1e-2;
  opt.record_stride = 10;
  for (auto _ : state) benchmark::DoNotOptimize(simulate(g, signals, init, opt).samples());
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(opt.horizon / opt.h_step));
}
BENCHMARK(BM_SimulateLoop)->Arg(8)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
