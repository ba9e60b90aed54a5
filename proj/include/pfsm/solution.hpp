#pragma once

#include <vector>

namespace pfsm {

// Decoded scheme X = {x, y, lambda}. Bus numbers in `bus_of_run` are 1-based
// (as in the integer encoding); type indices are 0-based catalog positions.
struct Solution {
  std::vector<int> bus_of_run;  // size R*
  std::vector<int> type_of_bus; // size K*
  std::vector<int> lambda_pct;  // size K*, passenger share of bus volume in percent
  int unresolved_conflicts = 0; // duty overlaps the repair could not remove

  int bus_count() const { return static_cast<int>(type_of_bus.size()); }
  int type_of_run(int run_idx) const { return type_of_bus[bus_of_run[run_idx] - 1]; }
  int lambda_of_run(int run_idx) const { return lambda_pct[bus_of_run[run_idx] - 1]; }

  friend bool operator==(const Solution&, const Solution&) = default;
};

}  // namespace pfsm
