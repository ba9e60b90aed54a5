#include "pfsm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "pfsm/economics.hpp"

namespace pfsm {

double diesel_emissions_kg(double km, const CarbonFactors& f) { return km * f.diesel_l_per_km * f.diesel_kg_per_l; }

double electric_emissions_kg(double kwh, const CarbonFactors& f) { return kwh * f.grid_kg_per_kwh; }

double total_bus_km(const Instance& inst, const Solution&) {
  double km = 0.0;
  for (int ri = 0; ri < inst.run_count(); ++ri) km += run_distance(inst, ri, true);
  return km;
}

double bus_energy_kwh(const Instance& inst, const Solution& sol) {
  double kwh = 0.0;
  for (int ri = 0; ri < inst.run_count(); ++ri) {
    const Run& r = inst.runs[ri];
    if (r.energy_kwh)
      kwh += *r.energy_kwh;
    else
      kwh += run_distance(inst, ri, true) * inst.vehicle_types[sol.type_of_run(ri)].energy_kwh_per_km;
  }
  return kwh;
}

TruckPlan truck_plan(const Instance& inst) {
  if (!inst.trucks) throw std::invalid_argument("instance has no truck parameters");
  const TruckParams& tp = *inst.trucks;
  std::map<std::pair<int, int>, double> volume;
  for (const DemandRecord& d : inst.demand) {
    if (d.parcels == 0) continue;
    const Run& r = inst.runs[inst.run_index(d.run)];
    volume[{r.line, r.direction}] += static_cast<double>(d.parcels) * inst.parcel_volume_m3;
  }
  TruckPlan plan;
  for (const auto& [key, vol] : volume) {
    TruckFlow f;
    f.line = key.first;
    f.direction = key.second;
    f.volume_m3 = vol;
    f.trucks = static_cast<int>(std::ceil(vol / tp.capacity_m3 - 1e-9));
    f.km = f.trucks * 2.0 * inst.full_span_km(f.line);
    plan.fleet += f.trucks;
    plan.km += f.km;
    plan.flows.push_back(f);
  }
  plan.fuel_cost = plan.km * tp.fuel_cost_per_km;
  plan.purchasing = plan.fleet * tp.purchasing_cost_per_day;
  plan.wages = plan.fleet * tp.wage_per_day;
  return plan;
}

Instance without_freight(const Instance& inst) {
  Instance out = inst;
  out.demand.clear();
  for (const DemandRecord& d : inst.demand)
    if (d.passengers > 0) {
      DemandRecord p = d;
      p.parcels = 0;
      out.demand.push_back(p);
    }
  out.finalize();
  return out;
}

int separated_type(const Instance& inst) {
  if (inst.separated_bus_type) return *inst.separated_bus_type;
  for (int t = 0; t < inst.type_count(); ++t)
    if (inst.vehicle_types[t].name == "medium") return t;
  return inst.type_count() / 2;
}

Solution separated_solution(const Instance& inst, const Solution& pfsm) {
  Solution s = pfsm;
  std::fill(s.type_of_bus.begin(), s.type_of_bus.end(), separated_type(inst));
  std::fill(s.lambda_pct.begin(), s.lambda_pct.end(), 100);
  return s;
}

Comparison compare_modes(const Instance& inst, const Solution& pfsm, const EvalOptions& opts) {
  Comparison c;
  c.trucks = truck_plan(inst);
  c.pfsm = Evaluator(inst, opts).evaluate(pfsm);
  const Instance bus_only = without_freight(inst);
  const Solution sep = separated_solution(inst, pfsm);
  c.separated = Evaluator(bus_only, opts).evaluate(sep);
  c.z_separated = c.separated.Z();
  c.z_separated_with_freight = c.z_separated + freight_revenue(inst, opts.fare_mode) - c.trucks.cost();
  c.t_increase_pct = c.separated.T() > 0 ? (c.pfsm.T() - c.separated.T()) / c.separated.T() * 100.0 : 0.0;
  c.pfsm_fleet = inst.fleet_size;
  c.separated_fleet = inst.fleet_size + c.trucks.fleet;
  c.pfsm_kwh = bus_energy_kwh(inst, pfsm);
  c.separated_kwh = bus_energy_kwh(bus_only, sep);
  c.pfsm_co2_kg = electric_emissions_kg(c.pfsm_kwh, inst.carbon);
  c.separated_co2_kg = electric_emissions_kg(c.separated_kwh, inst.carbon) + diesel_emissions_kg(c.trucks.km, inst.carbon);
  return c;
}

ContributionMetrics contribution_metrics(const Instance& inst, const Evaluation& ev, double parcels_per_seat) {
  ContributionMetrics m;
  const double P = static_cast<double>(inst.total_passengers());
  const double Q = static_cast<double>(inst.total_parcels());
  double pax_space = 0.0, space = 0.0;
  for (int ri = 0; ri < inst.run_count(); ++ri) {
    const double V = inst.vehicle_types[ev.solution.type_of_run(ri)].capacity_m3;
    pax_space += ev.solution.lambda_of_run(ri) / 100.0 * V;
    space += V;
  }
  const double share = space > 0 ? pax_space / space : 1.0;
  const double variable = ev.costs.running + ev.costs.dwell + ev.costs.toll;
  if (P > 0) {
    m.passenger_revenue_unit = ev.costs.passenger_revenue / P;
    m.passenger_profit_unit = (ev.costs.passenger_revenue - share * variable) / P;
  }
  if (Q > 0) {
    m.parcel_revenue_unit = ev.costs.freight_revenue / Q;
    m.parcel_profit_unit = (ev.costs.freight_revenue - (1.0 - share) * variable) / Q;
  }
  if (m.passenger_profit_unit != 0.0) m.pcr = m.parcel_profit_unit / m.passenger_profit_unit;
  if (m.passenger_revenue_unit != 0.0) m.ier = m.parcel_revenue_unit / m.passenger_revenue_unit;
  m.spcr = parcels_per_seat * m.pcr;
  return m;
}

std::vector<long> largest_remainder(const std::vector<long>& counts, long target) {
  const long sum = std::accumulate(counts.begin(), counts.end(), 0L);
  std::vector<long> out(counts.size(), 0);
  if (sum <= 0 || target <= 0) return out;
  std::vector<double> frac(counts.size());
  long assigned = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double exact = static_cast<double>(counts[i]) * static_cast<double>(target) / static_cast<double>(sum);
    out[i] = static_cast<long>(std::floor(exact + 1e-9));
    frac[i] = exact - static_cast<double>(out[i]);
    assigned += out[i];
  }
  std::vector<std::size_t> order(counts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  for (std::size_t k = 0; assigned < target && k < order.size(); ++k, ++assigned) ++out[order[k]];
  return out;
}

Instance scale_demand(const Instance& inst, long passengers, long parcels) {
  Instance out = inst;
  auto rescale = [&](long DemandRecord::*field, long target) {
    if (target < 0) return;
    std::vector<long> counts;
    for (const auto& d : out.demand) counts.push_back(d.*field);
    const auto scaled = largest_remainder(counts, target);
    for (std::size_t i = 0; i < scaled.size(); ++i) out.demand[i].*field = scaled[i];
  };
  rescale(&DemandRecord::passengers, passengers);
  rescale(&DemandRecord::parcels, parcels);
  out.finalize();
  return out;
}

const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::passenger_demand: return "passenger_demand";
    case SweepAxis::freight_demand: return "freight_demand";
    case SweepAxis::t_max: return "t_max";
    case SweepAxis::lambda_min: return "lambda_min";
  }
  return "t_max";
}

SweepAxis sweep_axis_from_string(const std::string& s) {
  if (s == "passenger_demand") return SweepAxis::passenger_demand;
  if (s == "freight_demand") return SweepAxis::freight_demand;
  if (s == "t_max" || s == "T_max") return SweepAxis::t_max;
  if (s == "lambda_min") return SweepAxis::lambda_min;
  throw std::invalid_argument("unknown sweep axis '" + s + "'");
}

Instance apply_cell(const Instance& inst, const std::vector<SweepAxis>& axes, const std::vector<double>& values) {
  long pax = -1, parcels = -1;
  Instance out = inst;
  for (std::size_t a = 0; a < axes.size(); ++a) {
    switch (axes[a]) {
      case SweepAxis::passenger_demand: pax = std::lround(values[a]); break;
      case SweepAxis::freight_demand: parcels = std::lround(values[a]); break;
      case SweepAxis::t_max: out.limits.t_max_min = values[a]; break;
      case SweepAxis::lambda_min: out.limits.lambda_min = values[a] / 100.0; break;
    }
  }
  if (pax >= 0 || parcels >= 0) return scale_demand(out, pax, parcels);
  out.finalize();
  return out;
}

std::vector<SweepCell> run_sweep(const Instance& inst, const SweepSpec& spec, const SolverConfig& base) {
  if (spec.axes.empty() || spec.axes.size() > 2 || spec.values.size() != spec.axes.size())
    throw std::invalid_argument("sweep needs one or two axes with values");
  for (const auto& v : spec.values)
    if (v.empty()) throw std::invalid_argument("sweep axis without values");
  if (spec.seeds < 1) throw std::invalid_argument("sweep needs at least one seed");

  std::vector<std::vector<double>> points;
  if (spec.axes.size() == 1) {
    for (double v : spec.values[0]) points.push_back({v});
  } else {
    for (double a : spec.values[0])
      for (double b : spec.values[1]) points.push_back({a, b});
  }
  std::vector<SweepCell> cells(points.size() * spec.seeds);
  for (std::size_t p = 0; p < points.size(); ++p)
    for (int s = 0; s < spec.seeds; ++s) {
      SweepCell& c = cells[p * spec.seeds + s];
      c.values = points[p];
      c.seed = spec.base_seed + static_cast<std::uint64_t>(s);
    }

  // Instances are built up front: finalize() may throw, which must not happen
  // inside the parallel region.
  std::vector<Instance> variants;
  std::vector<Scalarizer> scalarizers;
  variants.reserve(points.size());
  for (const auto& p : points) {
    variants.push_back(apply_cell(inst, spec.axes, p));
    scalarizers.push_back(base.scalarizer ? *base.scalarizer
                                          : reference_scalarizer(variants.back(), base.eval, 1000, 0, base.penalty_mode));
  }

  const long n = static_cast<long>(cells.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    SweepCell& c = cells[i];
    const Instance& v = variants[i / spec.seeds];
    SolverConfig cfg = base;
    cfg.seed = c.seed;
    cfg.parallel = false;
    cfg.scalarizer = scalarizers[i / spec.seeds];
    const OptimizeResult r = optimize(v, cfg);
    c.Z = r.evaluation.Z();
    c.T = r.evaluation.T();
    c.F = r.fitness.F;
    c.feasible = r.feasible;
    c.metrics = contribution_metrics(v, r.evaluation);
  }
  return cells;
}

}  // namespace pfsm
