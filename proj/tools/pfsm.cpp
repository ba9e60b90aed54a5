// pfsm: command-line front end (optimize / compare / sweep / validate / carbon).
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pfsm/analysis.hpp"
#include "pfsm/kernels.hpp"
#include "pfsm/optimize.hpp"
#include "pfsm/report.hpp"

namespace fs = std::filesystem;
using namespace pfsm;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kInfeasible = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string instance;
  std::string algo = "ijs";
  int pop = 100;
  int iters = 150;
  std::uint64_t seed = 1;
  std::string fare_mode = "described";
  std::string wait_mode = "waiting";
  double tmax = -1.0;
  double lambda_min = -1.0;  // percent
  int monte_carlo = 0;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool solver) {
  cmd->add_option("--instance", c.instance, "instance JSON")->required();
  cmd->add_option("--fare-mode", c.fare_mode, "described|literal")->check(CLI::IsMember({"described", "literal"}));
  cmd->add_option("--wait-mode", c.wait_mode, "waiting|literal")->check(CLI::IsMember({"waiting", "literal"}));
  cmd->add_option("--tmax", c.tmax, "override T_max (minutes)");
  cmd->add_option("--lambda-min", c.lambda_min, "override lambda_min (percent)");
  cmd->add_option("--out", c.out, "output directory");
  if (!solver) return;
  cmd->add_option("--algo", c.algo, "ijs|js|ga|pso|gwo")->check(CLI::IsMember({"ijs", "js", "ga", "pso", "gwo"}));
  cmd->add_option("--pop", c.pop, "population size")->check(CLI::PositiveNumber);
  cmd->add_option("--iters", c.iters, "iterations")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", c.seed, "random seed");
  cmd->add_option("--monte-carlo", c.monte_carlo, "Monte-Carlo reliability samples")->check(CLI::NonNegativeNumber);
}

Instance load(const Common& c) {
  Instance inst = load_instance_file(c.instance);
  if (c.tmax >= 0) inst.limits.t_max_min = c.tmax;
  if (c.lambda_min >= 0) inst.limits.lambda_min = c.lambda_min / 100.0;
  inst.finalize();
  return inst;
}

SolverConfig config(const Common& c) {
  SolverConfig cfg;
  cfg.algorithm = algorithm_from_string(c.algo);
  cfg.population = c.pop;
  cfg.iterations = c.iters;
  cfg.seed = c.seed;
  cfg.eval.fare_mode = fare_mode_from_string(c.fare_mode);
  cfg.eval.wait_mode = wait_mode_from_string(c.wait_mode);
  return cfg;
}

fs::path out_dir(const Common& c) {
  fs::path dir = c.out.empty() ? fs::path(".") : fs::path(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream os(p);
  if (!os) throw InputError("cannot write " + p.string());
  os << text;
}

// Solves and builds the report shared by optimize and compare.
struct Solved {
  Instance inst;
  SolverConfig cfg;
  OptimizeResult res;
  Report report;
};

Solved solve(const Common& c) {
  Solved s{load(c), config(c), {}, {}};
  // Weights fitted once per instance, so F is comparable across seeds and algorithms.
  s.cfg.scalarizer = reference_scalarizer(s.inst, s.cfg.eval);
  s.res = optimize(s.inst, s.cfg);
  s.report = make_report(s.inst, s.res.evaluation, s.cfg.eval);
  attach_solver(s.report, s.cfg, s.res);
  if (c.monte_carlo > 0) {
    const Evaluator ev(s.inst, s.cfg.eval);
    attach_reliability(s.report, s.inst, mc_reliability_omp(s.inst, ev.plan(), c.monte_carlo, s.cfg.seed));
  }
  return s;
}

int cmd_optimize(const Common& c) {
  Solved s = solve(c);
  const fs::path dir = out_dir(c);
  write_file(dir / "report.json", serialize_report(s.report));
  std::ostringstream trace;
  write_trace_csv(trace, s.res.trace);
  write_file(dir / "trace.csv", trace.str());
  print_summary(std::cout, s.report);
  if (!s.res.feasible) {
    std::cerr << "pfsm: no feasible solution found; report holds the least-violating scheme\n";
    return kInfeasible;
  }
  return kOk;
}

int cmd_compare(const Common& c) {
  Solved s = solve(c);
  if (!s.inst.trucks) throw InputError("instance has no truck parameters; cannot build the separated mode");
  const Comparison cmp = compare_modes(s.inst, s.res.best, s.cfg.eval);
  attach_comparison(s.report, cmp);
  const fs::path dir = out_dir(c);
  write_file(dir / "compare.json", serialize_report(s.report));
  print_summary(std::cout, s.report);
  if (!s.res.feasible) {
    std::cerr << "pfsm: no feasible PFSM scheme found\n";
    return kInfeasible;
  }
  return kOk;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

int cmd_sweep(const Common& c, const std::string& axes, const std::string& values, int seeds) {
  const Instance inst = load(c);
  SweepSpec spec;
  spec.seeds = seeds;
  spec.base_seed = c.seed;
  try {
    for (const auto& a : split(axes, ',')) spec.axes.push_back(sweep_axis_from_string(a));
    for (const auto& group : split(values, ';')) {
      std::vector<double> v;
      for (const auto& x : split(group, ',')) v.push_back(std::stod(x));
      spec.values.push_back(v);
    }
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("bad sweep specification: ") + e.what());
  }
  if (spec.axes.empty() || spec.axes.size() > 2 || spec.axes.size() != spec.values.size())
    throw InputError("--sweep-axis needs one or two axes and --sweep-values one ';'-separated group per axis");

  std::vector<SweepCell> cells;
  try {
    cells = run_sweep(inst, spec, config(c));
  } catch (const InstanceError& e) {
    throw InputError(std::string("sweep cell: ") + e.what());
  }
  const fs::path dir = out_dir(c);
  std::ostringstream csv;
  write_sweep_csv(csv, spec, cells);
  write_file(dir / "sweep.csv", csv.str());
  std::cout << csv.str();
  return kOk;
}

int cmd_validate(const Common& c) {
  const Instance inst = load(c);
  const ValidationReport rep = validate_instance(inst);
  for (const Finding& f : rep.findings) std::cout << to_string(f.severity) << " " << f.code << ": " << f.message << "\n";
  std::cout << inst.run_count() << " runs, " << inst.total_passengers() << " passengers, " << inst.total_parcels()
            << " parcels, peak " << rep.peak_concurrent_runs << " concurrent runs (fleet " << inst.fleet_size
            << ")\n";
  for (const RunAggregate& ra : rep.aggregates) {
    std::cout << "run " << ra.run << ":";
    for (const StopAggregate& sa : ra.stops)
      if (sa.boarding || sa.alighting || sa.parcels_on || sa.parcels_off)
        std::cout << " " << sa.stop << "[+" << sa.boarding << "/-" << sa.alighting << " p+" << sa.parcels_on << "/-"
                  << sa.parcels_off << "]";
    std::cout << "\n";
  }
  return rep.ok() ? kOk : kInputError;
}

int cmd_carbon(const std::string& instance, double km, double kwh) {
  CarbonFactors f;
  if (!instance.empty()) f = load_instance_file(instance).carbon;
  if (km < 0 || kwh < 0) throw InputError("distances and energy must be nonnegative");
  const double diesel = diesel_emissions_kg(km, f);
  const double electric = electric_emissions_kg(kwh, f);
  std::cout << "diesel_km," << fmt6(km) << "\ndiesel_kg," << fmt6(diesel) << "\nelectric_kwh," << fmt6(kwh)
            << "\nelectric_kg," << fmt6(electric) << "\ntotal_kg," << fmt6(diesel + electric) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Passenger-freight shared mobility: bus scheduling and capacity allocation"};
  app.require_subcommand(1);

  Common opt, cmp, swp, val;
  auto* c_opt = app.add_subcommand("optimize", "optimize a scheme; writes report.json and trace.csv");
  add_common(c_opt, opt, true);
  auto* c_cmp = app.add_subcommand("compare", "PFSM vs separated passenger/parcel transport");
  add_common(c_cmp, cmp, true);
  auto* c_swp = app.add_subcommand("sweep", "sensitivity grid; writes sweep.csv");
  add_common(c_swp, swp, true);
  std::string axes, values;
  int seeds = 1;
  c_swp->add_option("--sweep-axis", axes, "passenger_demand,freight_demand,t_max,lambda_min (one or two)")->required();
  c_swp->add_option("--sweep-values", values, "comma-separated values, ';' between axes")->required();
  c_swp->add_option("--seeds", seeds, "seeds per cell")->check(CLI::PositiveNumber);
  auto* c_val = app.add_subcommand("validate", "check an instance and print demand aggregates");
  add_common(c_val, val, false);
  auto* c_car = app.add_subcommand("carbon", "CO2 of diesel km and electric kWh");
  std::string car_instance;
  double km = 0.0, kwh = 0.0;
  c_car->add_option("--instance", car_instance, "take emission factors from this instance");
  c_car->add_option("--km", km, "diesel vehicle-km");
  c_car->add_option("--kwh", kwh, "electric energy");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (*c_opt) return cmd_optimize(opt);
    if (*c_cmp) return cmd_compare(cmp);
    if (*c_swp) return cmd_sweep(swp, axes, values, seeds);
    if (*c_val) return cmd_validate(val);
    if (*c_car) return cmd_carbon(car_instance, km, kwh);
  } catch (const InstanceError& e) {
    std::cerr << "pfsm: " << e.what() << "\n";
    return kInputError;
  } catch (const InputError& e) {
    std::cerr << "pfsm: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "pfsm: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
