#pragma once

#include "pfsm/economics.hpp"
#include "pfsm/encoding.hpp"
#include "pfsm/model.hpp"
#include "pfsm/operators.hpp"
#include "pfsm/service_time.hpp"

namespace pfsm {

struct EvalOptions {
  FareMode fare_mode = FareMode::described;
  WaitMode wait_mode = WaitMode::waiting;
};

// Everything both levels know about one decoded scheme; no fitness yet.
struct Evaluation {
  Solution solution;
  CostBreakdown costs;
  TimeBreakdown time;
  ConstraintResiduals residuals;
  double violation = 0.0;  // normalized residual sum
  bool feasible = false;

  double Z() const { return costs.profit; }
  double T() const { return time.avg; }
};

class Evaluator {
 public:
  explicit Evaluator(const Instance& inst, EvalOptions opts = {});

  const Instance& instance() const { return *inst_; }
  const SearchSpace& space() const { return space_; }
  const TimelinePlan& plan() const { return plan_; }
  const EvalOptions& options() const { return opts_; }

  Evaluation evaluate(const Solution& sol) const;
  Evaluation evaluate(const Position& position) const { return evaluate(decode(position, space_, *inst_)); }
  RunTimeline timeline(const Solution& sol) const { return simulate_timeline(*inst_, plan_, sol); }

 private:
  const Instance* inst_;
  EvalOptions opts_;
  SearchSpace space_;
  TimelinePlan plan_;
};

}  // namespace pfsm
