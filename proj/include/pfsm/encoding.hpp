#pragma once

#include <vector>

#include "pfsm/model.hpp"
#include "pfsm/solution.hpp"

namespace pfsm {

// Continuous search box for X = {x, y, lambda}: R* run dimensions, then K*
// type dimensions, then K* lambda dimensions. Each box cell rounds to one
// integer value.
struct SearchSpace {
  int runs = 0;
  int buses = 0;
  int types = 0;
  int lambda_min_pct = 0;
  int lambda_step_pct = 1;
  std::vector<double> lower;
  std::vector<double> upper;

  int dim() const { return runs + 2 * buses; }
  int lambda_levels() const;  // number of admissible lambda values
};

SearchSpace make_search_space(const Instance& inst);

// Rounds a position to the integer scheme and repairs duty overlaps.
Solution decode(const std::vector<double>& position, const SearchSpace& space, const Instance& inst);
// Rounding only, no repair.
Solution decode_raw(const std::vector<double>& position, const SearchSpace& space);
// Grid point of a scheme (inverse of decode for conflict-free schemes).
std::vector<double> encode(const Solution& sol, const SearchSpace& space);

// Reassigns the later of two overlapping runs to the lowest-index bus that is
// free for it; counts the overlaps that no bus can take.
void repair(Solution& sol, const Instance& inst);

// Runs of one bus overlap in time (touching ends allowed).
bool overlaps(const Run& a, const Run& b);

}  // namespace pfsm
