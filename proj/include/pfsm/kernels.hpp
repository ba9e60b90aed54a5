#pragma once

#include <cstdint>
#include <vector>

#include "pfsm/evaluate.hpp"

namespace pfsm {

// Population evaluation. Both produce identical results; the serial one is the
// reference for tests and benchmarks.
std::vector<Evaluation> evaluate_batch_serial(const Evaluator& ev, const std::vector<Position>& positions);
std::vector<Evaluation> evaluate_batch_omp(const Evaluator& ev, const std::vector<Position>& positions);

// Monte-Carlo check of the time budget: per run, the share of sampled
// terminal-to-terminal travel times (segment mean + sigma * N(0,1)) that stay
// within the Cornish-Fisher budget at the instance's gamma.
struct McReliability {
  int samples = 0;
  std::vector<double> budget_min;   // per run
  std::vector<double> mean_min;     // per run
  std::vector<long> within;         // per run, sample count <= budget
  std::vector<double> empirical;    // within / samples
  std::vector<double> analytic;     // normal-model reliability of the budget
};

McReliability mc_reliability_serial(const Instance& inst, const TimelinePlan& plan, int samples, std::uint64_t seed);
McReliability mc_reliability_omp(const Instance& inst, const TimelinePlan& plan, int samples, std::uint64_t seed);

}  // namespace pfsm
