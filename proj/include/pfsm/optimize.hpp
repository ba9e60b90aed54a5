#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pfsm/evaluate.hpp"
#include "pfsm/scalarize.hpp"

namespace pfsm {

enum class Algorithm : std::uint8_t { ijs, js, ga, pso, gwo };

const char* to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);

struct JellyfishParams {
  double beta_d = 3.0;       // distribution coefficient of the ocean current
  double gamma = 0.1;        // passive motion coefficient
  double c0 = 0.5;           // time-control switch
  double levy_beta = 1.5;
  double de_cr = 0.5;
  double tent_mu = 2.0;
  double logistic_mu = 4.0;  // plain JS initialisation
};

// Textbook defaults; none of these come from the jellyfish papers.
struct GaParams {
  int tournament = 2;
  double crossover = 0.9;
  double mutation_sigma = 0.1;  // fraction of the box width
  double mutation_rate = -1.0;  // per gene; <= 0 means 1/D
};

struct PsoParams {
  double inertia = 0.7298;
  double c1 = 1.49618;
  double c2 = 1.49618;
  double vmax = 0.2;  // fraction of the box width
};

struct GwoParams {
  double a0 = 2.0;
};

struct SolverConfig {
  Algorithm algorithm = Algorithm::ijs;
  int population = 100;
  int iterations = 150;
  std::uint64_t seed = 1;
  bool parallel = true;
  EvalOptions eval;
  // Fixed scalarizer; fitted on the initial population when absent.
  std::optional<Scalarizer> scalarizer;
  std::optional<double> penalty_coefficient;
  PenaltyMode penalty_mode = PenaltyMode::linear;
  JellyfishParams js;
  GaParams ga;
  PsoParams pso;
  GwoParams gwo;
};

struct TraceRow {
  int iter = 0;
  double best_F = 0.0;
  double best_Z = 0.0;
  double best_T = 0.0;  // average minutes per passenger
  int feasible_count = 0;
  long evals = 0;
};

struct SolverTrace {
  std::vector<TraceRow> rows;
  double initial_best_F = 0.0;
  double wall_seconds = 0.0;
  long evaluations = 0;

  // First iteration whose best F equals the final best F (0 if the initial
  // population already had it).
  int first_hit_iteration() const;
};

struct OptimizeResult {
  Solution best;
  Evaluation evaluation;
  Fitness fitness;
  Scalarizer scalarizer;
  SolverTrace trace;
  bool feasible = false;
};

OptimizeResult optimize(const Instance& inst, const SolverConfig& config);

// Scalarizer fitted on uniform random schemes. Passing the same one to several
// runs makes their F values comparable across algorithms and seeds.
Scalarizer reference_scalarizer(const Instance& inst, const EvalOptions& opts = {}, int samples = 1000,
                                std::uint64_t seed = 0, PenaltyMode mode = PenaltyMode::linear);

// Every scheme of the search space, for tiny instances. Throws if there are
// more than `limit` of them.
std::vector<Solution> enumerate_schemes(const Instance& inst, long limit = 1000000);

}  // namespace pfsm
