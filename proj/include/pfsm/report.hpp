#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pfsm/analysis.hpp"
#include "pfsm/evaluate.hpp"
#include "pfsm/kernels.hpp"
#include "pfsm/optimize.hpp"

namespace pfsm {

// One bus of the scheme.
struct SchemeRow {
  int bus = 0;                 // 1-based
  std::vector<int> runs;       // run ids, by departure
  std::string type;
  int type_index = 0;
  int lambda_pct = 0;
  int seats = 0;
  double freight_m3 = 0.0;

  friend bool operator==(const SchemeRow&, const SchemeRow&) = default;
};

struct CarbonSummary {
  CarbonFactors factors;
  double bus_kwh = 0.0;
  double bus_co2_kg = 0.0;
  double truck_km = 0.0;      // separated mode only
  double truck_co2_kg = 0.0;
  double total_co2_kg = 0.0;

  friend bool operator==(const CarbonSummary&, const CarbonSummary&) = default;
};

struct SolverMeta {
  std::string algorithm;
  std::uint64_t seed = 0;
  int population = 0;
  int iterations = 0;
  long evaluations = 0;
  double wall_seconds = 0.0;
  double F = 0.0;
  double w1 = 0.0;
  double w2 = 0.0;
  int first_hit_iteration = 0;

  friend bool operator==(const SolverMeta&, const SolverMeta&) = default;
};

struct SeparatedSummary {
  CostBreakdown bus_costs;     // freight-free instance, passengers only
  TimeBreakdown bus_time;
  int buses = 0;
  int trucks = 0;
  double truck_km = 0.0;
  double truck_fuel = 0.0;
  double truck_purchasing = 0.0;
  double truck_wages = 0.0;
  double z_bus = 0.0;
  double z_with_freight = 0.0;
  double t_increase_pct = 0.0;
  double kwh = 0.0;
  double co2_kg = 0.0;       // buses + trucks

  friend bool operator==(const SeparatedSummary&, const SeparatedSummary&) = default;
};

struct ReliabilityRow {
  int run = 0;
  double mean_min = 0.0;
  double budget_min = 0.0;
  double analytic = 0.0;
  double empirical = 0.0;

  friend bool operator==(const ReliabilityRow&, const ReliabilityRow&) = default;
};

struct Report {
  std::string instance;
  std::string fare_mode;
  std::string wait_mode;
  std::vector<SchemeRow> scheme;
  CostBreakdown costs;
  TimeBreakdown time;
  double bus_km = 0.0;
  bool feasible = false;
  double violation = 0.0;
  CarbonSummary carbon;
  std::optional<SolverMeta> solver;
  std::optional<SeparatedSummary> separated;
  int mc_samples = 0;
  std::vector<ReliabilityRow> reliability;

  friend bool operator==(const Report&, const Report&) = default;
};

Report make_report(const Instance& inst, const Evaluation& ev, const EvalOptions& opts);
void attach_solver(Report& r, const SolverConfig& cfg, const OptimizeResult& res);
// Fills the truck fields of the carbon summary; its total stays the PFSM one.
void attach_comparison(Report& r, const Comparison& c);
void attach_reliability(Report& r, const Instance& inst, const McReliability& mc);

std::string serialize_report(const Report& r);
// Throws std::runtime_error on malformed input.
Report parse_report(const std::string& text);

// 6 significant digits.
std::string fmt6(double v);

void write_trace_csv(std::ostream& os, const SolverTrace& trace);
void write_sweep_csv(std::ostream& os, const SweepSpec& spec, const std::vector<SweepCell>& cells);

// Short human-readable summary for the terminal.
void print_summary(std::ostream& os, const Report& r);

}  // namespace pfsm
