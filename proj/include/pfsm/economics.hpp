#pragma once

#include <vector>

#include "pfsm/model.hpp"
#include "pfsm/service_time.hpp"
#include "pfsm/solution.hpp"

namespace pfsm {

// floor(lambda * V / seat volume), with lambda as a fraction.
int seat_count(const VehicleType& vt, double lambda, double seat_volume_m3);
// Same, lambda in integer percent (exact for the encoded values).
int seat_count_pct(const VehicleType& vt, int lambda_pct, double seat_volume_m3);

// Seats of every bus of the scheme.
std::vector<int> bus_seats(const Instance& inst, const Solution& sol);

// Toll class 0..3 for a seat count; the boundary falls in the lower class.
int toll_class(const TollTable& toll, int seats);
double toll_per_run(const TollTable& toll, int seats, double toll_km);
double toll_cost(const Instance& inst, const Solution& sol);

double dwell_cost(const Instance& inst, const RunTimeline& timeline);
double dwell_cost(double cost_per_hour, double total_dwell_s);

struct FleetCosts {
  double running = 0.0;     // C_km
  double purchasing = 0.0;  // C_fix
};

FleetCosts fixed_and_running_cost(const Instance& inst, const Solution& sol);

double passenger_fare(const Fares& fares, double per_km_fare, double km, FareMode mode);
double freight_fare(const Fares& fares, double km, FareMode mode);

double passenger_revenue(const Instance& inst, const Solution& sol, FareMode mode);
double freight_revenue(const Instance& inst, FareMode mode);

struct ConstraintResiduals {
  std::vector<double> passenger_overload;  // per run, persons
  std::vector<double> freight_overload_m3; // per run
  double lambda_violation = 0.0;           // sum over buses of max(0, lambda_min - lambda)
  double type_violations = 0.0;            // buses with an out-of-catalog type
  double seat_shortfall = 0.0;             // total demand beyond the seats of all runs
  double volume_shortfall_m3 = 0.0;        // total parcel volume beyond all freight space
  double avg_time_excess = 0.0;            // minutes above T_max
  double stranded_passengers = 0.0;        // left behind after the last run of a line
  double assignment_conflicts = 0.0;       // unassigned runs or unresolved duty overlaps

  double total_passenger_overload() const;
  double total_freight_overload() const;
  bool feasible() const;
  // Dimensionless sum, each residual scaled by a natural magnitude of the instance.
  double normalized(const Instance& inst) const;
};

ConstraintResiduals constraint_residuals(const Instance& inst, const Solution& sol, const RunTimeline& timeline,
                                         double avg_time);

struct CostBreakdown {
  double toll = 0.0;
  double dwell = 0.0;
  double running = 0.0;
  double purchasing = 0.0;
  double passenger_revenue = 0.0;
  double freight_revenue = 0.0;
  double profit = 0.0;

  double total_cost() const { return toll + dwell + running + purchasing; }
  friend bool operator==(const CostBreakdown&, const CostBreakdown&) = default;
};

CostBreakdown profit(const Instance& inst, const Solution& sol, const RunTimeline& timeline, FareMode mode);

}  // namespace pfsm
