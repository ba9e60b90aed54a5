#include "pfsm/report.hpp"

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <stdexcept>

#include <json.hpp>

namespace pfsm {

using nlohmann::json;

Report make_report(const Instance& inst, const Evaluation& ev, const EvalOptions& opts) {
  Report r;
  r.instance = inst.name;
  r.fare_mode = to_string(opts.fare_mode);
  r.wait_mode = to_string(opts.wait_mode);
  r.costs = ev.costs;
  r.time = ev.time;
  r.feasible = ev.feasible;
  r.violation = ev.violation;
  r.bus_km = total_bus_km(inst, ev.solution);

  const Solution& s = ev.solution;
  for (int k = 0; k < s.bus_count(); ++k) {
    SchemeRow row;
    row.bus = k + 1;
    row.type_index = s.type_of_bus[k];
    row.type = inst.vehicle_types.at(row.type_index).name;
    row.lambda_pct = s.lambda_pct[k];
    const VehicleType& vt = inst.vehicle_types[row.type_index];
    row.seats = seat_count_pct(vt, row.lambda_pct, inst.seat_volume_m3);
    row.freight_m3 = vt.capacity_m3 * (100 - row.lambda_pct) / 100.0;
    r.scheme.push_back(row);
  }
  for (int ri : inst.runs_by_departure()) {
    const int b = s.bus_of_run[ri];
    if (b >= 1 && b <= s.bus_count()) r.scheme[b - 1].runs.push_back(inst.runs[ri].id);
  }

  r.carbon.factors = inst.carbon;
  r.carbon.bus_kwh = bus_energy_kwh(inst, s);
  r.carbon.bus_co2_kg = electric_emissions_kg(r.carbon.bus_kwh, inst.carbon);
  r.carbon.total_co2_kg = r.carbon.bus_co2_kg;
  return r;
}

void attach_solver(Report& r, const SolverConfig& cfg, const OptimizeResult& res) {
  SolverMeta m;
  m.algorithm = to_string(cfg.algorithm);
  m.seed = cfg.seed;
  m.population = cfg.population;
  m.iterations = cfg.iterations;
  m.evaluations = res.trace.evaluations;
  m.wall_seconds = res.trace.wall_seconds;
  m.F = res.fitness.F;
  m.w1 = res.scalarizer.weights.w1;
  m.w2 = res.scalarizer.weights.w2;
  m.first_hit_iteration = res.trace.first_hit_iteration();
  r.solver = m;
}

void attach_comparison(Report& r, const Comparison& c) {
  SeparatedSummary s;
  s.bus_costs = c.separated.costs;
  s.bus_time = c.separated.time;
  s.buses = c.separated_fleet - c.trucks.fleet;
  s.trucks = c.trucks.fleet;
  s.truck_km = c.trucks.km;
  s.truck_fuel = c.trucks.fuel_cost;
  s.truck_purchasing = c.trucks.purchasing;
  s.truck_wages = c.trucks.wages;
  s.z_bus = c.z_separated;
  s.z_with_freight = c.z_separated_with_freight;
  s.t_increase_pct = c.t_increase_pct;
  s.kwh = c.separated_kwh;
  s.co2_kg = c.separated_co2_kg;
  r.separated = s;
  r.carbon.truck_km = c.trucks.km;
  r.carbon.truck_co2_kg = diesel_emissions_kg(c.trucks.km, r.carbon.factors);
}

void attach_reliability(Report& r, const Instance& inst, const McReliability& mc) {
  r.mc_samples = mc.samples;
  r.reliability.clear();
  for (int ri = 0; ri < inst.run_count(); ++ri)
    r.reliability.push_back({inst.runs[ri].id, mc.mean_min[ri], mc.budget_min[ri], mc.analytic[ri], mc.empirical[ri]});
}

// ---- JSON ------------------------------------------------------------------

namespace {

json costs_json(const CostBreakdown& c) {
  // C_dwell is also the idle cost of the comparison table; one number, two labels.
  return {{"toll", c.toll},
          {"dwell", c.dwell},
          {"idle", c.dwell},
          {"running", c.running},
          {"purchasing", c.purchasing},
          {"passenger_revenue", c.passenger_revenue},
          {"freight_revenue", c.freight_revenue},
          {"profit", c.profit}};
}

CostBreakdown costs_from(const json& j) {
  CostBreakdown c;
  c.toll = j.at("toll").get<double>();
  c.dwell = j.at("dwell").get<double>();
  c.running = j.at("running").get<double>();
  c.purchasing = j.at("purchasing").get<double>();
  c.passenger_revenue = j.at("passenger_revenue").get<double>();
  c.freight_revenue = j.at("freight_revenue").get<double>();
  c.profit = j.at("profit").get<double>();
  return c;
}

json time_json(const TimeBreakdown& t) {
  return {{"cruise", t.cruise}, {"dwell", t.dwell}, {"wait", t.wait},           {"detention", t.detention},
          {"total", t.total},   {"avg", t.avg},     {"passengers", t.passengers}};
}

TimeBreakdown time_from(const json& j) {
  TimeBreakdown t;
  t.cruise = j.at("cruise").get<double>();
  t.dwell = j.at("dwell").get<double>();
  t.wait = j.at("wait").get<double>();
  t.detention = j.at("detention").get<double>();
  t.total = j.at("total").get<double>();
  t.avg = j.at("avg").get<double>();
  t.passengers = j.at("passengers").get<long>();
  return t;
}

}  // namespace

std::string serialize_report(const Report& r) {
  json j;
  j["format"] = "pfsm-report";
  j["version"] = 1;
  j["instance"] = r.instance;
  j["fare_mode"] = r.fare_mode;
  j["wait_mode"] = r.wait_mode;
  json scheme = json::array();
  for (const SchemeRow& row : r.scheme)
    scheme.push_back({{"bus", row.bus},
                      {"runs", row.runs},
                      {"type", row.type},
                      {"type_index", row.type_index},
                      {"lambda_pct", row.lambda_pct},
                      {"seats", row.seats},
                      {"freight_m3", row.freight_m3}});
  j["scheme"] = scheme;
  j["costs"] = costs_json(r.costs);
  j["time"] = time_json(r.time);
  j["bus_km"] = r.bus_km;
  j["feasible"] = r.feasible;
  j["violation"] = r.violation;
  j["carbon"] = {{"factors",
                  {{"diesel_kg_per_l", r.carbon.factors.diesel_kg_per_l},
                   {"diesel_l_per_km", r.carbon.factors.diesel_l_per_km},
                   {"grid_kg_per_kwh", r.carbon.factors.grid_kg_per_kwh}}},
                 {"bus_kwh", r.carbon.bus_kwh},
                 {"bus_co2_kg", r.carbon.bus_co2_kg},
                 {"truck_km", r.carbon.truck_km},
                 {"truck_co2_kg", r.carbon.truck_co2_kg},
                 {"total_co2_kg", r.carbon.total_co2_kg}};
  if (r.solver) {
    const SolverMeta& m = *r.solver;
    j["solver"] = {{"algorithm", m.algorithm},     {"seed", m.seed},
                   {"population", m.population},   {"iterations", m.iterations},
                   {"evaluations", m.evaluations}, {"wall_seconds", m.wall_seconds},
                   {"F", m.F},                     {"w1", m.w1},
                   {"w2", m.w2},                   {"first_hit_iteration", m.first_hit_iteration}};
  }
  if (r.separated) {
    const SeparatedSummary& s = *r.separated;
    j["separated"] = {{"bus_costs", costs_json(s.bus_costs)},
                      {"bus_time", time_json(s.bus_time)},
                      {"buses", s.buses},
                      {"trucks", s.trucks},
                      {"truck_km", s.truck_km},
                      {"truck_fuel", s.truck_fuel},
                      {"truck_purchasing", s.truck_purchasing},
                      {"truck_wages", s.truck_wages},
                      {"z_bus", s.z_bus},
                      {"z_with_freight", s.z_with_freight},
                      {"t_increase_pct", s.t_increase_pct},
                      {"kwh", s.kwh},
                      {"co2_kg", s.co2_kg}};
  }
  if (r.mc_samples > 0) {
    json rows = json::array();
    for (const ReliabilityRow& row : r.reliability)
      rows.push_back({{"run", row.run},
                      {"mean_min", row.mean_min},
                      {"budget_min", row.budget_min},
                      {"analytic", row.analytic},
                      {"empirical", row.empirical}});
    j["reliability"] = {{"samples", r.mc_samples}, {"runs", rows}};
  }
  return j.dump(2) + "\n";
}

Report parse_report(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (j.value("format", "") != "pfsm-report") throw std::runtime_error("not a pfsm report");
    Report r;
    r.instance = j.at("instance").get<std::string>();
    r.fare_mode = j.at("fare_mode").get<std::string>();
    r.wait_mode = j.at("wait_mode").get<std::string>();
    for (const json& row : j.at("scheme")) {
      SchemeRow s;
      s.bus = row.at("bus").get<int>();
      s.runs = row.at("runs").get<std::vector<int>>();
      s.type = row.at("type").get<std::string>();
      s.type_index = row.at("type_index").get<int>();
      s.lambda_pct = row.at("lambda_pct").get<int>();
      s.seats = row.at("seats").get<int>();
      s.freight_m3 = row.at("freight_m3").get<double>();
      r.scheme.push_back(std::move(s));
    }
    r.costs = costs_from(j.at("costs"));
    r.time = time_from(j.at("time"));
    r.bus_km = j.at("bus_km").get<double>();
    r.feasible = j.at("feasible").get<bool>();
    r.violation = j.at("violation").get<double>();
    const json& c = j.at("carbon");
    r.carbon.factors.diesel_kg_per_l = c.at("factors").at("diesel_kg_per_l").get<double>();
    r.carbon.factors.diesel_l_per_km = c.at("factors").at("diesel_l_per_km").get<double>();
    r.carbon.factors.grid_kg_per_kwh = c.at("factors").at("grid_kg_per_kwh").get<double>();
    r.carbon.bus_kwh = c.at("bus_kwh").get<double>();
    r.carbon.bus_co2_kg = c.at("bus_co2_kg").get<double>();
    r.carbon.truck_km = c.at("truck_km").get<double>();
    r.carbon.truck_co2_kg = c.at("truck_co2_kg").get<double>();
    r.carbon.total_co2_kg = c.at("total_co2_kg").get<double>();
    if (j.contains("solver")) {
      const json& m = j["solver"];
      SolverMeta s;
      s.algorithm = m.at("algorithm").get<std::string>();
      s.seed = m.at("seed").get<std::uint64_t>();
      s.population = m.at("population").get<int>();
      s.iterations = m.at("iterations").get<int>();
      s.evaluations = m.at("evaluations").get<long>();
      s.wall_seconds = m.at("wall_seconds").get<double>();
      s.F = m.at("F").get<double>();
      s.w1 = m.at("w1").get<double>();
      s.w2 = m.at("w2").get<double>();
      s.first_hit_iteration = m.at("first_hit_iteration").get<int>();
      r.solver = s;
    }
    if (j.contains("separated")) {
      const json& m = j["separated"];
      SeparatedSummary s;
      s.bus_costs = costs_from(m.at("bus_costs"));
      s.bus_time = time_from(m.at("bus_time"));
      s.buses = m.at("buses").get<int>();
      s.trucks = m.at("trucks").get<int>();
      s.truck_km = m.at("truck_km").get<double>();
      s.truck_fuel = m.at("truck_fuel").get<double>();
      s.truck_purchasing = m.at("truck_purchasing").get<double>();
      s.truck_wages = m.at("truck_wages").get<double>();
      s.z_bus = m.at("z_bus").get<double>();
      s.z_with_freight = m.at("z_with_freight").get<double>();
      s.t_increase_pct = m.at("t_increase_pct").get<double>();
      s.kwh = m.at("kwh").get<double>();
      s.co2_kg = m.at("co2_kg").get<double>();
      r.separated = s;
    }
    if (j.contains("reliability")) {
      const json& m = j["reliability"];
      r.mc_samples = m.at("samples").get<int>();
      for (const json& row : m.at("runs"))
        r.reliability.push_back({row.at("run").get<int>(), row.at("mean_min").get<double>(),
                                 row.at("budget_min").get<double>(), row.at("analytic").get<double>(),
                                 row.at("empirical").get<double>()});
    }
    return r;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("bad report: ") + e.what());
  }
}

// ---- CSV -------------------------------------------------------------------

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void write_trace_csv(std::ostream& os, const SolverTrace& trace) {
  os << "iter,best_F,best_Z,best_T,feasible_count,evals\n";
  for (const TraceRow& r : trace.rows)
    os << r.iter << ',' << fmt6(r.best_F) << ',' << fmt6(r.best_Z) << ',' << fmt6(r.best_T) << ','
       << r.feasible_count << ',' << r.evals << '\n';
}

void write_sweep_csv(std::ostream& os, const SweepSpec& spec, const std::vector<SweepCell>& cells) {
  for (SweepAxis a : spec.axes) os << to_string(a) << ',';
  os << "seed,Z,T,F,feasible,pcr,ier,spcr\n";
  for (const SweepCell& c : cells) {
    for (double v : c.values) os << fmt6(v) << ',';
    os << c.seed << ',' << fmt6(c.Z) << ',' << fmt6(c.T) << ',' << fmt6(c.F) << ',' << (c.feasible ? 1 : 0) << ','
       << fmt6(c.metrics.pcr) << ',' << fmt6(c.metrics.ier) << ',' << fmt6(c.metrics.spcr) << '\n';
  }
}

void print_summary(std::ostream& os, const Report& r) {
  os << "instance " << r.instance << (r.feasible ? "  feasible" : "  INFEASIBLE") << "\n";
  for (const SchemeRow& row : r.scheme) {
    os << "  bus " << row.bus << "  " << std::setw(6) << std::left << row.type << std::right << "  lambda "
       << std::setw(3) << row.lambda_pct << "%  seats " << std::setw(3) << row.seats << "  runs";
    for (int id : row.runs) os << ' ' << id;
    os << "\n";
  }
  const CostBreakdown& c = r.costs;
  os << "  Z " << fmt6(c.profit) << "  (E_u " << fmt6(c.passenger_revenue) << ", E_f " << fmt6(c.freight_revenue)
     << ", C_km " << fmt6(c.running) << ", C_fix " << fmt6(c.purchasing) << ", C_dwell " << fmt6(c.dwell)
     << ", C_toll " << fmt6(c.toll) << ")\n";
  os << "  T " << fmt6(r.time.avg) << " min/passenger  (cruise " << fmt6(r.time.cruise) << ", dwell "
     << fmt6(r.time.dwell) << ", wait " << fmt6(r.time.wait) << ", detention " << fmt6(r.time.detention) << ")\n";
  os << "  bus " << fmt6(r.carbon.bus_kwh) << " kWh -> " << fmt6(r.carbon.bus_co2_kg) << " kg CO2\n";
  if (r.separated) {
    const SeparatedSummary& s = *r.separated;
    os << "  separated: Z_bus " << fmt6(s.z_bus) << ", with trucks " << fmt6(s.z_with_freight) << ", " << s.buses
       << " buses + " << s.trucks << " trucks, " << fmt6(s.truck_km) << " truck-km -> "
       << fmt6(r.carbon.truck_co2_kg) << " kg CO2 (total " << fmt6(s.co2_kg) << "); T increase " << fmt6(s.t_increase_pct) << "%\n";
  }
  if (r.solver)
    os << "  " << r.solver->algorithm << " seed " << r.solver->seed << "  F " << fmt6(r.solver->F) << "  "
       << r.solver->evaluations << " evals  " << fmt6(r.solver->wall_seconds) << " s\n";
}

}  // namespace pfsm
