#include "pfsm/kernels.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pfsm {

std::vector<Evaluation> evaluate_batch_serial(const Evaluator& ev, const std::vector<Position>& positions) {
  std::vector<Evaluation> out(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) out[i] = ev.evaluate(positions[i]);
  return out;
}

std::vector<Evaluation> evaluate_batch_omp(const Evaluator& ev, const std::vector<Position>& positions) {
  std::vector<Evaluation> out(positions.size());
  const long n = static_cast<long>(positions.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (long i = 0; i < n; ++i) out[i] = ev.evaluate(positions[i]);
  return out;
}

namespace {

struct RunPath {
  int first = 0, last = 0;  // travel indices of the passenger terminals
  SegmentTimeStats stats;
  double budget = 0.0;
};

std::vector<RunPath> run_paths(const Instance& inst, const TimelinePlan& plan) {
  std::vector<RunPath> paths(inst.run_count());
  for (int ri = 0; ri < inst.run_count(); ++ri) {
    const auto& p = plan.run(ri);
    RunPath& rp = paths[ri];
    rp.first = p.origin;
    rp.last = static_cast<int>(p.stops.size()) - 1;
    while (rp.last > rp.first && !p.passenger_stop[rp.last]) --rp.last;
    double var = 0.0;
    for (int k = rp.first; k < rp.last; ++k) {
      rp.stats.mean += p.segment_mean[k];
      var += p.segment_std[k] * p.segment_std[k];
    }
    rp.stats.std = std::sqrt(var);
    rp.stats.skewness = inst.bpr.skewness;
    rp.stats.kurtosis = inst.bpr.kurtosis;
    rp.budget = time_budget(rp.stats, inst.reliability_gamma);
  }
  return paths;
}

// One sample: every run's travel time from an independent substream.
void sample_once(const TimelinePlan& plan, const std::vector<RunPath>& paths, std::uint64_t seed, long s,
                 std::vector<long>& within) {
  for (std::size_t ri = 0; ri < paths.size(); ++ri) {
    Rng rng = substream(seed, static_cast<std::uint64_t>(s), ri, 0x3c);
    const auto& p = plan.run(static_cast<int>(ri));
    double t = 0.0;
    for (int k = paths[ri].first; k < paths[ri].last; ++k) t += p.segment_mean[k] + p.segment_std[k] * normal_draw(rng);
    if (t <= paths[ri].budget) ++within[ri];
  }
}

McReliability finish(const std::vector<RunPath>& paths, int samples, std::vector<long> within) {
  McReliability out;
  out.samples = samples;
  out.within = std::move(within);
  for (std::size_t ri = 0; ri < paths.size(); ++ri) {
    out.budget_min.push_back(paths[ri].budget);
    out.mean_min.push_back(paths[ri].stats.mean);
    out.empirical.push_back(samples > 0 ? static_cast<double>(out.within[ri]) / samples : 0.0);
    out.analytic.push_back(reliability(paths[ri].stats, paths[ri].budget));
  }
  return out;
}

}  // namespace

McReliability mc_reliability_serial(const Instance& inst, const TimelinePlan& plan, int samples, std::uint64_t seed) {
  const auto paths = run_paths(inst, plan);
  std::vector<long> within(paths.size(), 0);
  for (long s = 0; s < samples; ++s) sample_once(plan, paths, seed, s, within);
  return finish(paths, samples, std::move(within));
}

McReliability mc_reliability_omp(const Instance& inst, const TimelinePlan& plan, int samples, std::uint64_t seed) {
  const auto paths = run_paths(inst, plan);
  const std::size_t R = paths.size();
  std::vector<long> within(R, 0);
#pragma omp parallel
  {
    std::vector<long> local(R, 0);
#pragma omp for schedule(static)
    for (long s = 0; s < samples; ++s) sample_once(plan, paths, seed, s, local);
#pragma omp critical
    for (std::size_t ri = 0; ri < R; ++ri) within[ri] += local[ri];
  }
  return finish(paths, samples, std::move(within));
}

}  // namespace pfsm
