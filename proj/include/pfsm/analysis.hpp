#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pfsm/evaluate.hpp"
#include "pfsm/model.hpp"
#include "pfsm/optimize.hpp"

namespace pfsm {

double diesel_emissions_kg(double km, const CarbonFactors& f);
double electric_emissions_kg(double kwh, const CarbonFactors& f);

// Daily traction energy of a scheme: per-run energy when the timetable gives
// it, otherwise distance times the type's kWh/km.
double bus_energy_kwh(const Instance& inst, const Solution& sol);
double total_bus_km(const Instance& inst, const Solution& sol);

// Separated mode freight side. Parcels of one (line, direction) flow go by
// dedicated trucks sized to the flow volume; each truck makes one DC-to-DC
// round trip on that line.
struct TruckFlow {
  int line = 0;
  int direction = 1;
  double volume_m3 = 0.0;
  int trucks = 0;
  double km = 0.0;  // all trucks of the flow
};

struct TruckPlan {
  std::vector<TruckFlow> flows;
  int fleet = 0;
  double km = 0.0;
  double fuel_cost = 0.0;
  double purchasing = 0.0;
  double wages = 0.0;

  double cost() const { return fuel_cost + purchasing + wages; }
};

TruckPlan truck_plan(const Instance& inst);

// The instance with every parcel record removed.
Instance without_freight(const Instance& inst);
// Same duties, all buses of the separated type at 100% passenger space.
Solution separated_solution(const Instance& inst, const Solution& pfsm);
int separated_type(const Instance& inst);

struct Comparison {
  Evaluation pfsm;
  Evaluation separated;       // buses only, on the freight-free instance
  TruckPlan trucks;
  double z_separated = 0.0;   // bus-side profit of the separated mode
  double z_separated_with_freight = 0.0;  // plus freight revenue minus truck cost
  double t_increase_pct = 0.0;  // PFSM average time over the separated one
  int pfsm_fleet = 0;
  int separated_fleet = 0;    // buses + trucks
  double pfsm_kwh = 0.0;
  double separated_kwh = 0.0;
  double pfsm_co2_kg = 0.0;
  double separated_co2_kg = 0.0;
};

Comparison compare_modes(const Instance& inst, const Solution& pfsm, const EvalOptions& opts = {});

// Unit profit of one passenger vs one parcel. Variable cost (running, dwell,
// toll) is split by the passenger/freight share of the space of all runs.
struct ContributionMetrics {
  double passenger_revenue_unit = 0.0;  // r_p
  double parcel_revenue_unit = 0.0;     // r_f
  double passenger_profit_unit = 0.0;   // pi_p
  double parcel_profit_unit = 0.0;      // pi_f
  double pcr = 0.0;                     // pi_f / pi_p
  double ier = 0.0;                     // r_f / r_p: passengers worth one parcel
  double spcr = 0.0;                    // parcels per seat * pcr
};

ContributionMetrics contribution_metrics(const Instance& inst, const Evaluation& ev, double parcels_per_seat = 10.0);

// Integer apportionment: scales counts to sum to target, largest remainders
// first (ties by position).
std::vector<long> largest_remainder(const std::vector<long>& counts, long target);

// Rescales passenger and/or parcel totals keeping OD proportions. A negative
// target leaves that kind unchanged.
Instance scale_demand(const Instance& inst, long passengers, long parcels);

enum class SweepAxis : std::uint8_t { passenger_demand, freight_demand, t_max, lambda_min };
const char* to_string(SweepAxis a);
SweepAxis sweep_axis_from_string(const std::string& s);

struct SweepSpec {
  std::vector<SweepAxis> axes;               // one or two
  std::vector<std::vector<double>> values;   // per axis; lambda_min in percent
  int seeds = 1;
  std::uint64_t base_seed = 1;
};

struct SweepCell {
  std::vector<double> values;
  std::uint64_t seed = 0;
  double Z = 0.0;
  double T = 0.0;
  double F = 0.0;
  bool feasible = false;
  ContributionMetrics metrics;
};

// Applies one cell's axis values to a copy of the instance.
Instance apply_cell(const Instance& inst, const std::vector<SweepAxis>& axes, const std::vector<double>& values);

// Cells in row-major order of the axes, seeds innermost. Unless the base
// config fixes one, each cell's seeds share that cell's reference scalarizer.
std::vector<SweepCell> run_sweep(const Instance& inst, const SweepSpec& spec, const SolverConfig& base);

}  // namespace pfsm
