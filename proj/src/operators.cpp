#include "pfsm/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pfsm {

double tent_map(double x, double mu) { return x < 0.5 ? mu * x : mu * (1.0 - x); }

double logistic_map(double x, double mu) { return mu * x * (1.0 - x); }

bool chaos_degenerate(double x) {
  constexpr double pts[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  for (double p : pts)
    if (std::abs(x - p) < 1e-12) return true;
  return false;
}

double chaos_seed(std::uint64_t seed) {
  Rng rng(seed);
  double x = 0.0;
  do {
    x = rng.uniform();
  } while (x <= 0.0 || chaos_degenerate(x) || std::abs(x - 2.0 / 3.0) < 1e-9);
  return x;
}

namespace {

template <class Map>
std::vector<Position> chaotic_population(int n, const Position& lower, const Position& upper, std::uint64_t seed,
                                         Map next) {
  const std::size_t d = lower.size();
  std::vector<Position> pop(n, Position(d));
  // The tent map at mu = 2 shifts one mantissa bit out per step, so after ~50
  // steps the orbit lives on a coarse dyadic grid (and then hits 0). Reseed well
  // before that, and on any degenerate point.
  constexpr int kMaxRun = 40;
  std::uint64_t restarts = 0;
  int steps = 0;
  double x = chaos_seed(seed);
  for (int i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      x = next(x);
      if (++steps >= kMaxRun || chaos_degenerate(x) || x <= 0.0 || x >= 1.0) {
        x = chaos_seed(seed ^ (0x5bd1e995ULL * ++restarts));
        steps = 0;
      }
      pop[i][j] = lower[j] + x * (upper[j] - lower[j]);
    }
  }
  return pop;
}

}  // namespace

std::vector<Position> init_population_tent(int n, const Position& lower, const Position& upper, std::uint64_t seed,
                                           double mu) {
  return chaotic_population(n, lower, upper, seed, [mu](double x) { return tent_map(x, mu); });
}

std::vector<Position> init_population_logistic(int n, const Position& lower, const Position& upper,
                                               std::uint64_t seed, double mu) {
  return chaotic_population(n, lower, upper, seed, [mu](double x) { return logistic_map(x, mu); });
}

std::vector<Position> init_population_uniform(int n, const Position& lower, const Position& upper,
                                              std::uint64_t seed) {
  std::vector<Position> pop(n, Position(lower.size()));
  for (int i = 0; i < n; ++i) {
    Rng rng = substream(seed, 0, static_cast<std::uint64_t>(i), 0x1417);
    for (std::size_t j = 0; j < lower.size(); ++j) pop[i][j] = lower[j] + rng.uniform() * (upper[j] - lower[j]);
  }
  return pop;
}

double time_control(int t, int max_it, double r) {
  return std::abs((1.0 - static_cast<double>(t) / max_it) * (2.0 * r - 1.0));
}

Position ocean_current(const Position& x, const Position& best, const Position& mean, double beta_d, Rng& rng) {
  Position out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double r1 = rng.uniform();
    const double r2 = rng.uniform();
    out[j] = x[j] + r1 * (best[j] - beta_d * r2 * mean[j]);
  }
  return out;
}

Position passive_motion(const Position& x, const Position& lower, const Position& upper, double gamma, Rng& rng) {
  Position out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = x[j] + gamma * rng.uniform() * (upper[j] - lower[j]);
  return out;
}

Position active_motion(const Position& xi, double fi, const Position& xj, double fj, Rng& rng) {
  Position out(xi.size());
  const bool toward = fj >= fi;
  for (std::size_t k = 0; k < xi.size(); ++k) {
    const double dir = toward ? xj[k] - xi[k] : xi[k] - xj[k];
    out[k] = xi[k] + rng.uniform() * dir;
  }
  return out;
}

double mantegna_sigma(double beta) {
  const double num = std::tgamma(1.0 + beta) * std::sin(std::numbers::pi * beta / 2.0);
  const double den = std::tgamma((1.0 + beta) / 2.0) * beta * std::pow(2.0, (beta - 1.0) / 2.0);
  return std::pow(num / den, 1.0 / beta);
}

double levy_from(double u, double v, double beta) { return u / std::pow(std::abs(v), 1.0 / beta); }

double normal_draw(Rng& rng) {
  double u1 = rng.uniform();
  while (u1 <= 0.0) u1 = rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double levy_step(Rng& rng, double beta) {
  const double u = normal_draw(rng) * mantegna_sigma(beta);
  double v = normal_draw(rng);
  while (v == 0.0) v = normal_draw(rng);
  return levy_from(u, v, beta);
}

Position levy_flight(const Position& x, double beta, Rng& rng) {
  const double alpha = rng.uniform();
  Position out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = x[j] + alpha * levy_step(rng, beta);
  return out;
}

Position de_mutant(const Position& xi, const Position& xj, const Position& xk, double alpha) {
  Position v(xi.size());
  for (std::size_t d = 0; d < xi.size(); ++d) v[d] = xi[d] + alpha * (xj[d] - xk[d]);
  return v;
}

Position de_mutant_to_best(const Position& xi, const Position& best, const Position& xj, const Position& xk,
                           double alpha) {
  Position v(xi.size());
  for (std::size_t d = 0; d < xi.size(); ++d) v[d] = xi[d] + alpha * (best[d] - xi[d]) + alpha * (xj[d] - xk[d]);
  return v;
}

Position de_crossover(const Position& xi, const Position& v, double cr, Rng& rng) {
  Position u(xi.size());
  for (std::size_t d = 0; d < xi.size(); ++d) u[d] = rng.uniform() < cr ? v[d] : xi[d];
  return u;
}

double wrap_value(double x, double lower, double upper) {
  for (int pass = 0; pass < 2; ++pass) {
    if (x > upper)
      x = x - upper + lower;
    else if (x < lower)
      x = x - lower + upper;
    else
      return x;
  }
  return std::clamp(x, lower, upper);
}

void wrap_bounds(Position& x, const Position& lower, const Position& upper) {
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = wrap_value(x[j], lower[j], upper[j]);
}

}  // namespace pfsm
