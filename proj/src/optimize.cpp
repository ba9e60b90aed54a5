#include "pfsm/optimize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "pfsm/kernels.hpp"

namespace pfsm {

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::ijs: return "ijs";
    case Algorithm::js: return "js";
    case Algorithm::ga: return "ga";
    case Algorithm::pso: return "pso";
    case Algorithm::gwo: return "gwo";
  }
  return "ijs";
}

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "ijs") return Algorithm::ijs;
  if (s == "js") return Algorithm::js;
  if (s == "ga") return Algorithm::ga;
  if (s == "pso") return Algorithm::pso;
  if (s == "gwo") return Algorithm::gwo;
  throw std::invalid_argument("unknown algorithm '" + s + "'");
}

int SolverTrace::first_hit_iteration() const {
  if (rows.empty()) return 0;
  const double final_f = rows.back().best_F;
  if (initial_best_F >= final_f) return 0;
  for (const auto& r : rows)
    if (r.best_F >= final_f) return r.iter;
  return rows.back().iter;
}

namespace {

// Random-stream tags, one per kind of draw.
enum Tag : std::uint64_t { kMove = 1, kDe = 2, kGa = 3, kPso = 4, kGwo = 5, kInit = 6, kLevy = 7 };

struct Member {
  Position x;
  Evaluation eval;
  Fitness fit;
};

class Search {
 public:
  Search(const Instance& inst, const SolverConfig& cfg)
      : inst_(inst), cfg_(cfg), ev_(inst, cfg.eval), space_(ev_.space()) {
    if (cfg.population < 3) throw std::invalid_argument("population must be >= 3");
    if (cfg.iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  }

  OptimizeResult run() {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Position> init;
    const auto& lo = space_.lower;
    const auto& hi = space_.upper;
    switch (cfg_.algorithm) {
      case Algorithm::ijs: init = init_population_tent(cfg_.population, lo, hi, cfg_.seed, cfg_.js.tent_mu); break;
      case Algorithm::js:
        init = init_population_logistic(cfg_.population, lo, hi, cfg_.seed, cfg_.js.logistic_mu);
        break;
      default: init = init_population_uniform(cfg_.population, lo, hi, cfg_.seed); break;
    }
    std::vector<Evaluation> evals = batch(init);
    if (cfg_.scalarizer) {
      scal_ = *cfg_.scalarizer;
    } else {
      std::vector<std::pair<double, double>> samples;
      for (const auto& e : evals) samples.emplace_back(e.T(), e.Z());
      scal_ = fit_scalarizer(inst_, samples, cfg_.penalty_coefficient, cfg_.penalty_mode);
    }
    pop_.resize(init.size());
    for (std::size_t i = 0; i < init.size(); ++i) {
      pop_[i] = {std::move(init[i]), std::move(evals[i]), {}};
      pop_[i].fit = score(pop_[i].eval);
      offer(pop_[i]);
    }
    trace_.initial_best_F = best_.fit.F;

    switch (cfg_.algorithm) {
      case Algorithm::ijs:
      case Algorithm::js: jellyfish(cfg_.algorithm == Algorithm::ijs); break;
      case Algorithm::ga: genetic(); break;
      case Algorithm::pso: swarm(); break;
      case Algorithm::gwo: wolves(); break;
    }

    trace_.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    trace_.evaluations = evals_;
    OptimizeResult r;
    r.best = best_.eval.solution;
    r.evaluation = best_.eval;
    r.fitness = best_.fit;
    r.scalarizer = scal_;
    r.trace = trace_;
    r.feasible = best_.eval.feasible;
    return r;
  }

 private:
  std::vector<Evaluation> batch(const std::vector<Position>& xs) {
    evals_ += static_cast<long>(xs.size());
    return cfg_.parallel ? evaluate_batch_omp(ev_, xs) : evaluate_batch_serial(ev_, xs);
  }

  Fitness score(const Evaluation& e) const { return scal_(e.Z(), e.T(), e.violation, e.feasible); }

  void offer(const Member& m) {
    if (!has_best_ || m.fit.F > best_.fit.F) {
      best_ = m;
      has_best_ = true;
    }
  }

  void record(int t) {
    TraceRow row;
    row.iter = t;
    row.best_F = best_.fit.F;
    row.best_Z = best_.eval.Z();
    row.best_T = best_.eval.T();
    row.feasible_count =
        static_cast<int>(std::count_if(pop_.begin(), pop_.end(), [](const Member& m) { return m.eval.feasible; }));
    row.evals = evals_;
    trace_.rows.push_back(row);
  }

  // Evaluates candidates and keeps each one whose fitness is not worse.
  void greedy_accept(std::vector<Position>& cand) {
    std::vector<Evaluation> ev = batch(cand);
    for (std::size_t i = 0; i < pop_.size(); ++i) {
      Member m{std::move(cand[i]), std::move(ev[i]), {}};
      m.fit = score(m.eval);
      offer(m);
      if (m.fit.F >= pop_[i].fit.F) pop_[i] = std::move(m);
    }
  }

  int other_index(Rng& rng, int n, int not_a, int not_b = -1) {
    int j = rng.below(n - 1);
    // Skip the excluded indices while keeping the draw uniform.
    std::vector<int> ex{not_a};
    if (not_b >= 0) {
      j = rng.below(n - 2);
      ex.push_back(not_b);
    }
    std::sort(ex.begin(), ex.end());
    for (int e : ex)
      if (j >= e) ++j;
    return j;
  }

  void jellyfish(bool improved) {
    const int n = static_cast<int>(pop_.size());
    const int D = space_.dim();
    const auto& lo = space_.lower;
    const auto& hi = space_.upper;
    const auto& P = cfg_.js;
    for (int t = 1; t <= cfg_.iterations; ++t) {
      const Position best = best_.x;
      Position mean(D, 0.0);
      for (const auto& m : pop_)
        for (int d = 0; d < D; ++d) mean[d] += m.x[d] / n;

      std::vector<Position> cand(n);
      for (int i = 0; i < n; ++i) {
        Rng rng = substream(cfg_.seed, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(i), kMove);
        const double c = time_control(t, cfg_.iterations, rng.uniform());
        Position x;
        if (c >= P.c0) {
          x = ocean_current(pop_[i].x, best, mean, P.beta_d, rng);
        } else if (rng.uniform() > 1.0 - c) {
          x = passive_motion(pop_[i].x, lo, hi, P.gamma, rng);
        } else {
          const int j = other_index(rng, n, i);
          x = active_motion(pop_[i].x, pop_[i].fit.F, pop_[j].x, pop_[j].fit.F, rng);
        }
        wrap_bounds(x, lo, hi);
        cand[i] = std::move(x);
      }
      greedy_accept(cand);

      if (improved) {
        for (int i = 0; i < n; ++i) {
          Rng rng = substream(cfg_.seed, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(i), kLevy);
          Position x = levy_flight(pop_[i].x, P.levy_beta, rng);
          wrap_bounds(x, lo, hi);
          cand[i] = std::move(x);
        }
        greedy_accept(cand);
      }

      if (improved) {
        const Position lead = best_.x;  // after the Levy stage
        std::vector<Position> trial(n);
        for (int i = 0; i < n; ++i) {
          Rng rng = substream(cfg_.seed, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(i), kDe);
          const int j = other_index(rng, n, i);
          const int k = other_index(rng, n, i, j);
          const double alpha = rng.uniform();
          Position v = de_mutant_to_best(pop_[i].x, lead, pop_[j].x, pop_[k].x, alpha);
          Position u = de_crossover(pop_[i].x, v, P.de_cr, rng);
          wrap_bounds(u, lo, hi);
          trial[i] = std::move(u);
        }
        greedy_accept(trial);
      }
      record(t);
    }
  }

  int tournament(Rng& rng) {
    const int n = static_cast<int>(pop_.size());
    int w = rng.below(n);
    for (int k = 1; k < cfg_.ga.tournament; ++k) {
      const int c = rng.below(n);
      if (pop_[c].fit.F > pop_[w].fit.F) w = c;
    }
    return w;
  }

  void genetic() {
    const int n = static_cast<int>(pop_.size());
    const int D = space_.dim();
    const auto& lo = space_.lower;
    const auto& hi = space_.upper;
    const double pm = cfg_.ga.mutation_rate > 0 ? cfg_.ga.mutation_rate : 1.0 / D;
    for (int t = 1; t <= cfg_.iterations; ++t) {
      const int elite = static_cast<int>(
          std::max_element(pop_.begin(), pop_.end(), [](const Member& a, const Member& b) { return a.fit.F < b.fit.F; }) -
          pop_.begin());
      std::vector<Position> kids(n - 1);
      for (int i = 0; i < n - 1; ++i) {
        Rng rng = substream(cfg_.seed, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(i), kGa);
        const Position& a = pop_[tournament(rng)].x;
        const Position& b = pop_[tournament(rng)].x;
        Position c = a;
        if (rng.uniform() < cfg_.ga.crossover)
          for (int d = 0; d < D; ++d)
            if (rng.uniform() < 0.5) c[d] = b[d];
        for (int d = 0; d < D; ++d)
          if (rng.uniform() < pm) c[d] += cfg_.ga.mutation_sigma * (hi[d] - lo[d]) * normal_draw(rng);
        wrap_bounds(c, lo, hi);
        kids[i] = std::move(c);
      }
      std::vector<Evaluation> ev = batch(kids);
      std::vector<Member> next;
      next.reserve(n);
      next.push_back(pop_[elite]);
      for (int i = 0; i < n - 1; ++i) {
        Member m{std::move(kids[i]), std::move(ev[i]), {}};
        m.fit = score(m.eval);
        offer(m);
        next.push_back(std::move(m));
      }
      pop_ = std::move(next);
      record(t);
    }
  }

  void swarm() {
    const int n = static_cast<int>(pop_.size());
    const int D = space_.dim();
    const auto& lo = space_.lower;
    const auto& hi = space_.upper;
    const auto& P = cfg_.pso;
    std::vector<Position> vel(n, Position(D, 0.0));
    std::vector<Member> pbest = pop_;
    for (int i = 0; i < n; ++i) {
      Rng rng = substream(cfg_.seed, 0, static_cast<std::uint64_t>(i), kPso);
      for (int d = 0; d < D; ++d) vel[i][d] = (2.0 * rng.uniform() - 1.0) * P.vmax * (hi[d] - lo[d]);
    }
    for (int t = 1; t <= cfg_.iterations; ++t) {
      const Position g = best_.x;
      std::vector<Position> cand(n);
      for (int i = 0; i < n; ++i) {
        Rng rng = substream(cfg_.seed, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(i), kPso);
        Position x = pop_[i].x;
        for (int d = 0; d < D; ++d) {
          const double vmax = P.vmax * (hi[d] - lo[d]);
          double v = P.inertia * vel[i][d] + P.c1 * rng.uniform() * (pbest[i].x[d] - x[d]) +
                     P.c2 * rng.uniform() * (g[d] - x[d]);
          v = std::clamp(v, -vmax, vmax);
          x[d] += v;
          if (x[d] < lo[d] || x[d] > hi[d]) {
            x[d] = std::clamp(x[d], lo[d], hi[d]);
            v = 0.0;
          }
          vel[i][d] = v;
        }
        cand[i] = std::move(x);
      }
      std::vector<Evaluation> ev = batch(cand);
      for (int i = 0; i < n; ++i) {
        Member m{std::move(cand[i]), std::move(ev[i]), {}};
        m.fit = score(m.eval);
        offer(m);
        if (m.fit.F >= pbest[i].fit.F) pbest[i] = m;
        pop_[i] = std::move(m);
      }
      record(t);
    }
  }

  void wolves() {
    const int n = static_cast<int>(pop_.size());
    const int D = space_.dim();
    const auto& lo = space_.lower;
    const auto& hi = space_.upper;
    for (int t = 1; t <= cfg_.iterations; ++t) {
      std::vector<int> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return pop_[a].fit.F > pop_[b].fit.F; });
      // Alpha is the best found so far; beta and delta from the current pack.
      const Position alpha = best_.x;
      const Position beta = pop_[order[0]].x == alpha ? pop_[order[1]].x : pop_[order[0]].x;
      const Position delta = pop_[order[0]].x == alpha ? pop_[order[2]].x : pop_[order[1]].x;
      const double a = cfg_.gwo.a0 * (1.0 - static_cast<double>(t - 1) / cfg_.iterations);
      std::vector<Position> cand(n);
      for (int i = 0; i < n; ++i) {
        Rng rng = substream(cfg_.seed, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(i), kGwo);
        Position x(D);
        for (int d = 0; d < D; ++d) {
          double sum = 0.0;
          for (const Position* leader : {&alpha, &beta, &delta}) {
            const double A = 2.0 * a * rng.uniform() - a;
            const double C = 2.0 * rng.uniform();
            sum += (*leader)[d] - A * std::abs(C * (*leader)[d] - pop_[i].x[d]);
          }
          x[d] = std::clamp(sum / 3.0, lo[d], hi[d]);
        }
        cand[i] = std::move(x);
      }
      std::vector<Evaluation> ev = batch(cand);
      for (int i = 0; i < n; ++i) {
        Member m{std::move(cand[i]), std::move(ev[i]), {}};
        m.fit = score(m.eval);
        offer(m);
        pop_[i] = std::move(m);
      }
      record(t);
    }
  }

  const Instance& inst_;
  const SolverConfig& cfg_;
  Evaluator ev_;
  const SearchSpace& space_;
  Scalarizer scal_;
  std::vector<Member> pop_;
  Member best_;
  bool has_best_ = false;
  SolverTrace trace_;
  long evals_ = 0;
};

}  // namespace

OptimizeResult optimize(const Instance& inst, const SolverConfig& config) { return Search(inst, config).run(); }

Scalarizer reference_scalarizer(const Instance& inst, const EvalOptions& opts, int samples, std::uint64_t seed,
                                PenaltyMode mode) {
  const Evaluator ev(inst, opts);
  const auto xs = init_population_uniform(samples, ev.space().lower, ev.space().upper, seed);
  std::vector<std::pair<double, double>> tz;
  for (const Evaluation& e : evaluate_batch_omp(ev, xs)) tz.emplace_back(e.T(), e.Z());
  return fit_scalarizer(inst, tz, std::nullopt, mode);
}

std::vector<Solution> enumerate_schemes(const Instance& inst, long limit) {
  const SearchSpace s = make_search_space(inst);
  const int levels = s.lambda_levels();
  double total = std::pow(s.buses, s.runs) * std::pow(s.types, s.buses) * std::pow(levels, s.buses);
  if (total > static_cast<double>(limit)) throw std::length_error("search space too large to enumerate");

  std::set<std::vector<int>> seen;
  std::vector<Solution> out;
  const long n = static_cast<long>(total);
  for (long code = 0; code < n; ++code) {
    long c = code;
    Solution sol;
    for (int r = 0; r < s.runs; ++r, c /= s.buses) sol.bus_of_run.push_back(static_cast<int>(c % s.buses) + 1);
    for (int k = 0; k < s.buses; ++k, c /= s.types) sol.type_of_bus.push_back(static_cast<int>(c % s.types));
    for (int k = 0; k < s.buses; ++k, c /= levels)
      sol.lambda_pct.push_back(std::min(100, s.lambda_min_pct + static_cast<int>(c % levels) * s.lambda_step_pct));
    repair(sol, inst);
    std::vector<int> key = sol.bus_of_run;
    key.insert(key.end(), sol.type_of_bus.begin(), sol.type_of_bus.end());
    key.insert(key.end(), sol.lambda_pct.begin(), sol.lambda_pct.end());
    if (seen.insert(key).second) out.push_back(std::move(sol));
  }
  return out;
}

}  // namespace pfsm
