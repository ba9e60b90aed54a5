#include "pfsm/encoding.hpp"

#include <algorithm>
#include <cmath>

namespace pfsm {

// The top level is always 100% (passenger-only), even off the step grid.
int SearchSpace::lambda_levels() const { return (100 - lambda_min_pct + lambda_step_pct - 1) / lambda_step_pct + 1; }

SearchSpace make_search_space(const Instance& inst) {
  SearchSpace s;
  s.runs = inst.run_count();
  s.buses = inst.fleet_size;
  s.types = inst.type_count();
  s.lambda_min_pct = inst.limits.lambda_min_pct();
  s.lambda_step_pct = inst.limits.lambda_step_pct;
  for (int r = 0; r < s.runs; ++r) {
    s.lower.push_back(0.5);
    s.upper.push_back(s.buses + 0.5);
  }
  for (int k = 0; k < s.buses; ++k) {
    s.lower.push_back(-0.5);
    s.upper.push_back(s.types - 0.5);
  }
  // Lambda dimensions count admissible levels (lambda_min + level * step), so
  // every dimension has unit-width cells.
  for (int k = 0; k < s.buses; ++k) {
    s.lower.push_back(-0.5);
    s.upper.push_back(s.lambda_levels() - 0.5);
  }
  return s;
}

namespace {

int round_clamp(double v, int lo, int hi) {
  const double r = std::floor(v + 0.5);
  if (!(r >= lo)) return lo;  // also catches NaN
  if (r > hi) return hi;
  return static_cast<int>(r);
}

}  // namespace

Solution decode_raw(const std::vector<double>& p, const SearchSpace& s) {
  Solution sol;
  sol.bus_of_run.resize(s.runs);
  sol.type_of_bus.resize(s.buses);
  sol.lambda_pct.resize(s.buses);
  for (int r = 0; r < s.runs; ++r) sol.bus_of_run[r] = round_clamp(p[r], 1, s.buses);
  for (int k = 0; k < s.buses; ++k) sol.type_of_bus[k] = round_clamp(p[s.runs + k], 0, s.types - 1);
  for (int k = 0; k < s.buses; ++k) {
    const int level = round_clamp(p[s.runs + s.buses + k], 0, s.lambda_levels() - 1);
    sol.lambda_pct[k] = std::min(100, s.lambda_min_pct + level * s.lambda_step_pct);
  }
  return sol;
}

Solution decode(const std::vector<double>& position, const SearchSpace& space, const Instance& inst) {
  Solution sol = decode_raw(position, space);
  repair(sol, inst);
  return sol;
}

std::vector<double> encode(const Solution& sol, const SearchSpace& s) {
  std::vector<double> p;
  p.reserve(s.dim());
  for (int b : sol.bus_of_run) p.push_back(b);
  for (int t : sol.type_of_bus) p.push_back(t);
  for (int l : sol.lambda_pct) p.push_back(std::ceil(static_cast<double>(l - s.lambda_min_pct) / s.lambda_step_pct));
  return p;
}

bool overlaps(const Run& a, const Run& b) {
  return a.departure_min < b.arrival_min && b.departure_min < a.arrival_min;
}

void repair(Solution& sol, const Instance& inst) {
  const int K = sol.bus_count();
  std::vector<std::vector<int>> duties(K);
  auto free_for = [&](int bus, int ri) {
    for (int other : duties[bus])
      if (overlaps(inst.runs[other], inst.runs[ri])) return false;
    return true;
  };
  sol.unresolved_conflicts = 0;
  for (int ri : inst.runs_by_departure()) {
    int bus = sol.bus_of_run[ri] - 1;
    if (!free_for(bus, ri)) {
      int alt = -1;
      for (int k = 0; k < K && alt < 0; ++k)
        if (free_for(k, ri)) alt = k;
      if (alt >= 0)
        bus = alt;
      else
        ++sol.unresolved_conflicts;
    }
    sol.bus_of_run[ri] = bus + 1;
    duties[bus].push_back(ri);
  }
}

}  // namespace pfsm
