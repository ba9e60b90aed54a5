// Serial reference vs OpenMP kernels. Population sizes match the solver
// defaults (100) and a larger sweep-style batch.
#include <benchmark/benchmark.h>

#include <string>

#include "pfsm/kernels.hpp"
#include "pfsm/model.hpp"
#include "pfsm/operators.hpp"

using namespace pfsm;

namespace {

const Instance& simnet() {
  static const Instance inst = load_instance_file(std::string(PFSM_DATA_DIR) + "/simnet.json");
  return inst;
}

template <auto Kernel>
void BM_EvaluateBatch(benchmark::State& state) {
  const Evaluator ev(simnet());
  const auto pop = init_population_uniform(static_cast<int>(state.range(0)), ev.space().lower, ev.space().upper, 1);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(ev, pop));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void BM_McReliability(benchmark::State& state) {
  const TimelinePlan plan(simnet());
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(simnet(), plan, static_cast<int>(state.range(0)), 7));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_EvaluateBatch<evaluate_batch_serial>)->Name("evaluate_batch/serial")->Arg(100)->Arg(1000);
BENCHMARK(BM_EvaluateBatch<evaluate_batch_omp>)->Name("evaluate_batch/omp")->Arg(100)->Arg(1000);
BENCHMARK(BM_McReliability<mc_reliability_serial>)->Name("mc_reliability/serial")->Arg(10000)->Arg(100000);
BENCHMARK(BM_McReliability<mc_reliability_omp>)->Name("mc_reliability/omp")->Arg(10000)->Arg(100000);

BENCHMARK_MAIN();
