#include "pfsm/evaluate.hpp"

namespace pfsm {

Evaluator::Evaluator(const Instance& inst, EvalOptions opts)
    : inst_(&inst), opts_(opts), space_(make_search_space(inst)), plan_(inst) {}

Evaluation Evaluator::evaluate(const Solution& sol) const {
  Evaluation e;
  e.solution = sol;
  const RunTimeline tl = simulate_timeline(*inst_, plan_, sol);
  e.time = time_breakdown(*inst_, tl, opts_.wait_mode);
  e.costs = profit(*inst_, sol, tl, opts_.fare_mode);
  e.residuals = constraint_residuals(*inst_, sol, tl, e.time.avg);
  e.feasible = e.residuals.feasible();
  e.violation = e.feasible ? 0.0 : e.residuals.normalized(*inst_);
  return e;
}

}  // namespace pfsm
