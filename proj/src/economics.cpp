#include "pfsm/economics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pfsm {

int seat_count(const VehicleType& vt, double lambda, double seat_volume_m3) {
  // Small slack so that e.g. 0.6 * 20 / 0.4 does not floor to 29.
  return static_cast<int>(std::floor(lambda * vt.capacity_m3 / seat_volume_m3 + 1e-9));
}

int seat_count_pct(const VehicleType& vt, int lambda_pct, double seat_volume_m3) {
  return static_cast<int>(std::floor(lambda_pct * vt.capacity_m3 / (100.0 * seat_volume_m3) + 1e-9));
}

std::vector<int> bus_seats(const Instance& inst, const Solution& sol) {
  std::vector<int> seats(sol.type_of_bus.size());
  for (std::size_t k = 0; k < seats.size(); ++k)
    seats[k] = seat_count_pct(inst.vehicle_types.at(sol.type_of_bus[k]), sol.lambda_pct[k], inst.seat_volume_m3);
  return seats;
}

int toll_class(const TollTable& toll, int seats) {
  const auto& b = toll.seat_thresholds;
  if (!(b[0] < b[1] && b[1] < b[2])) throw std::invalid_argument("toll thresholds must be strictly increasing");
  if (seats <= b[0]) return 0;
  if (seats <= b[1]) return 1;
  if (seats <= b[2]) return 2;
  return 3;
}

double toll_per_run(const TollTable& toll, int seats, double toll_km) {
  if (!toll.enabled) return 0.0;
  return toll.rates[toll_class(toll, seats)] * toll_km;
}

double toll_cost(const Instance& inst, const Solution& sol) {
  if (!inst.toll.enabled) return 0.0;
  const std::vector<int> seats = bus_seats(inst, sol);
  double total = 0.0;
  for (int ri = 0; ri < inst.run_count(); ++ri)
    total += toll_per_run(inst.toll, seats[sol.bus_of_run[ri] - 1], inst.line(inst.runs[ri].line).toll_km);
  return total;
}

double dwell_cost(double cost_per_hour, double total_dwell_s) { return cost_per_hour / 3600.0 * total_dwell_s; }

double dwell_cost(const Instance& inst, const RunTimeline& timeline) {
  return dwell_cost(inst.dwell.cost_per_hour, timeline.total_dwell_s);
}

FleetCosts fixed_and_running_cost(const Instance& inst, const Solution& sol) {
  FleetCosts c;
  for (int ri = 0; ri < inst.run_count(); ++ri)
    c.running += run_distance(inst, ri, true) * inst.vehicle_types[sol.type_of_run(ri)].running_cost_per_km;
  // Idle buses are still bought (leased) for the day.
  for (int t : sol.type_of_bus) c.purchasing += inst.vehicle_types[t].purchasing_cost_per_day;
  return c;
}

namespace {

double piecewise_fare(double base, double per_km, double base_km, double km, FareMode mode) {
  if (km <= base_km) return mode == FareMode::described ? base : base + per_km * km;
  return base + per_km * (km - base_km);
}

}  // namespace

double passenger_fare(const Fares& fares, double per_km_fare, double km, FareMode mode) {
  return piecewise_fare(fares.passenger_base, per_km_fare, fares.passenger_base_km, km, mode);
}

double freight_fare(const Fares& fares, double km, FareMode mode) {
  return piecewise_fare(fares.freight_base, fares.freight_per_km, fares.freight_base_km, km, mode);
}

double passenger_revenue(const Instance& inst, const Solution& sol, FareMode mode) {
  double total = 0.0;
  for (const DemandRecord& d : inst.demand) {
    if (d.passengers == 0) continue;
    const int ri = inst.run_index(d.run);
    const double eta = inst.vehicle_types[sol.type_of_run(ri)].per_km_fare;
    const double km = inst.path_km(inst.runs[ri].line, d.from, d.to);
    total += static_cast<double>(d.passengers) * passenger_fare(inst.fares, eta, km, mode);
  }
  return total;
}

double freight_revenue(const Instance& inst, FareMode mode) {
  double total = 0.0;
  for (const DemandRecord& d : inst.demand) {
    if (d.parcels == 0) continue;
    const double km = inst.path_km(inst.runs[inst.run_index(d.run)].line, d.from, d.to);
    total += static_cast<double>(d.parcels) * freight_fare(inst.fares, km, mode);
  }
  return total;
}

double ConstraintResiduals::total_passenger_overload() const {
  double s = 0.0;
  for (double v : passenger_overload) s += v;
  return s;
}

double ConstraintResiduals::total_freight_overload() const {
  double s = 0.0;
  for (double v : freight_overload_m3) s += v;
  return s;
}

bool ConstraintResiduals::feasible() const {
  return total_passenger_overload() == 0.0 && total_freight_overload() == 0.0 && lambda_violation == 0.0 &&
         type_violations == 0.0 && seat_shortfall == 0.0 && volume_shortfall_m3 == 0.0 &&
         avg_time_excess == 0.0 && stranded_passengers == 0.0 && assignment_conflicts == 0.0;
}

double ConstraintResiduals::normalized(const Instance& inst) const {
  const double pax = std::max(1.0, static_cast<double>(inst.total_passengers()));
  const double vol = std::max(1.0, static_cast<double>(inst.total_parcels()) * inst.parcel_volume_m3);
  return total_passenger_overload() / pax + total_freight_overload() / vol + lambda_violation + type_violations +
         seat_shortfall / pax + volume_shortfall_m3 / vol + avg_time_excess / std::max(1.0, inst.limits.t_max_min) +
         stranded_passengers / pax + assignment_conflicts / std::max(1, inst.run_count());
}

ConstraintResiduals constraint_residuals(const Instance& inst, const Solution& sol, const RunTimeline& timeline,
                                         double avg_time) {
  ConstraintResiduals res;
  const int R = inst.run_count();
  res.passenger_overload.assign(R, 0.0);
  res.freight_overload_m3.assign(R, 0.0);

  int bad_types = 0;
  for (int t : sol.type_of_bus)
    if (t < 0 || t >= inst.type_count()) ++bad_types;
  res.type_violations = bad_types;

  int bad_runs = sol.unresolved_conflicts;
  for (int b : sol.bus_of_run)
    if (b < 1 || b > sol.bus_count()) ++bad_runs;
  res.assignment_conflicts = bad_runs;
  if (bad_types > 0 || static_cast<int>(sol.bus_of_run.size()) != R) return res;

  const double lmin = inst.limits.lambda_min_pct();
  for (int pct : sol.lambda_pct) res.lambda_violation += std::max(0.0, (lmin - pct) / 100.0);

  double seats_total = 0.0, space_total = 0.0;
  for (int ri = 0; ri < R; ++ri) {
    const RunTrace& tr = timeline.runs[ri];
    res.passenger_overload[ri] = std::max(0.0, static_cast<double>(tr.peak_onboard - tr.seats));
    // Volumes are sums of parcel volumes; ignore rounding noise.
    const double over = tr.peak_volume_m3 - tr.freight_capacity_m3;
    res.freight_overload_m3[ri] = over > 1e-9 ? over : 0.0;
    seats_total += tr.seats;
    space_total += tr.freight_capacity_m3;
  }
  res.seat_shortfall = std::max(0.0, static_cast<double>(inst.total_passengers()) - seats_total);
  const double short_vol = static_cast<double>(inst.total_parcels()) * inst.parcel_volume_m3 - space_total;
  res.volume_shortfall_m3 = short_vol > 1e-9 ? short_vol : 0.0;
  res.avg_time_excess = std::max(0.0, avg_time - inst.limits.t_max_min);
  res.stranded_passengers = static_cast<double>(timeline.stranded_passengers);
  return res;
}

CostBreakdown profit(const Instance& inst, const Solution& sol, const RunTimeline& timeline, FareMode mode) {
  CostBreakdown c;
  c.toll = toll_cost(inst, sol);
  c.dwell = dwell_cost(inst, timeline);
  const FleetCosts fc = fixed_and_running_cost(inst, sol);
  c.running = fc.running;
  c.purchasing = fc.purchasing;
  c.passenger_revenue = passenger_revenue(inst, sol, mode);
  c.freight_revenue = freight_revenue(inst, mode);
  c.profit = c.passenger_revenue + c.freight_revenue - c.running - c.dwell - c.purchasing - c.toll;
  return c;
}

}  // namespace pfsm
