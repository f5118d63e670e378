// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "bn/cutset.hpp"
#include "bn/enumeration_kernels.hpp"
#include "bn/oracle.hpp"
#include "support/networks.hpp"

namespace {

using namespace bn;
using namespace bn::testing;

BayesianNetwork dense_network(std::size_t nodes) {
  Rng rng(nodes);
  return parametrize(random_dag_shape(rng, nodes, 2, 3, 0.35, 3), rng);
}

Evidence leaf_evidence(const BayesianNetwork& net) {
  Evidence e;
  e.hard(net.size() - 1, 0);
  return e;
}

void BM_EnumerationSerial(benchmark::State& state) {
  const auto net = dense_network(static_cast<std::size_t>(state.range(0)));
  const auto e = leaf_evidence(net);
  const std::vector<VarId> targets{0};
  for (auto _ : state) benchmark::DoNotOptimize(kernels::weighted_table_serial(net, e, targets));
  state.counters["joint_states"] = static_cast<double>(kernels::joint_state_count(net));
}

void BM_EnumerationParallel(benchmark::State& state) {
  const auto net = dense_network(static_cast<std::size_t>(state.range(0)));
  const auto e = leaf_evidence(net);
  const std::vector<VarId> targets{0};
  const auto partitions = static_cast<std::size_t>(4 * omp_get_max_threads());
  for (auto _ : state) benchmark::DoNotOptimize(kernels::weighted_table_parallel(net, e, targets, partitions));
  state.counters["joint_states"] = static_cast<double>(kernels::joint_state_count(net));
  state.counters["threads"] = omp_get_max_threads();
}

void BM_ArgmaxSerial(benchmark::State& state) {
  const auto net = dense_network(static_cast<std::size_t>(state.range(0)));
  const auto e = leaf_evidence(net);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::argmax_serial(net, e));
}

void BM_ArgmaxParallel(benchmark::State& state) {
  const auto net = dense_network(static_cast<std::size_t>(state.range(0)));
  const auto e = leaf_evidence(net);
  const auto partitions = static_cast<std::size_t>(4 * omp_get_max_threads());
  for (auto _ : state) benchmark::DoNotOptimize(kernels::argmax_parallel(net, e, partitions));
}

void BM_Cutset(benchmark::State& state, bool parallel) {
  Rng rng(static_cast<std::uint64_t>(state.range(0)));
  const auto net = parametrize(random_loopy_shape(rng, static_cast<std::size_t>(state.range(0)), 2, 3, 4), rng);
  const auto e = leaf_evidence(net);
  ConditioningOptions options;
  options.parallel = parallel;
  std::size_t instantiations = 0;
  for (auto _ : state) {
    auto r = condition_on_cutset(net, 0, e, options);
    instantiations = r.instantiations;
    benchmark::DoNotOptimize(r);
  }
  state.counters["instantiations"] = static_cast<double>(instantiations);
}

}  // namespace

BENCHMARK(BM_EnumerationSerial)->DenseRange(12, 18, 3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnumerationParallel)->DenseRange(12, 18, 3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ArgmaxSerial)->DenseRange(12, 18, 3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ArgmaxParallel)->DenseRange(12, 18, 3)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Cutset, serial, false)->Arg(12)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Cutset, parallel, true)->Arg(12)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
