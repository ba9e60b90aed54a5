#pragma once

#include <cstdint>
#include <vector>

#include "pfsm/rng.hpp"

namespace pfsm {

using Position = std::vector<double>;

double tent_map(double x, double mu = 2.0);
double logistic_map(double x, double mu = 4.0);

// True for the points where the tent/logistic orbit stalls (0, .25, .5, .75, 1).
bool chaos_degenerate(double x);

// Starting value in (0, 1) derived from a seed, away from degenerate points.
double chaos_seed(std::uint64_t seed);

// Population drawn from one chaotic orbit, individual-major, mapped onto the
// box. When finite-precision iteration lands on a degenerate point the orbit
// restarts from a fresh seeded value.
std::vector<Position> init_population_tent(int n, const Position& lower, const Position& upper, std::uint64_t seed,
                                           double mu = 2.0);
std::vector<Position> init_population_logistic(int n, const Position& lower, const Position& upper,
                                               std::uint64_t seed, double mu = 4.0);
std::vector<Position> init_population_uniform(int n, const Position& lower, const Position& upper,
                                              std::uint64_t seed);

// |(1 - t/max_it)(2 r - 1)|
double time_control(int t, int max_it, double r);

// X + r1 (X* - beta_d r2 mu), per-dimension r1, r2.
Position ocean_current(const Position& x, const Position& best, const Position& mean, double beta_d, Rng& rng);

// X + gamma r (U - L)
Position passive_motion(const Position& x, const Position& lower, const Position& upper, double gamma, Rng& rng);

// X + r d with d = Xj - Xi when F(Xj) >= F(Xi), else Xi - Xj.
Position active_motion(const Position& xi, double fi, const Position& xj, double fj, Rng& rng);

// Mantegna sigma_u for the given stability index.
double mantegna_sigma(double beta);
double levy_from(double u, double v, double beta);
double levy_step(Rng& rng, double beta);
Position levy_flight(const Position& x, double beta, Rng& rng);

// Mutant X + alpha (Xj - Xk) and binomial crossover with rate cr.
Position de_mutant(const Position& xi, const Position& xj, const Position& xk, double alpha);
// X + alpha (X* - X) + alpha (Xj - Xk): the difference move pulled toward the best.
Position de_mutant_to_best(const Position& xi, const Position& best, const Position& xj, const Position& xk,
                           double alpha);
Position de_crossover(const Position& xi, const Position& v, double cr, Rng& rng);

// Opposite-bound wrap; a second pass handles points up to two spans out, and
// anything still outside is clamped.
double wrap_value(double x, double lower, double upper);
void wrap_bounds(Position& x, const Position& lower, const Position& upper);

// Standard normal draw (Box-Muller; no cached state, so streams stay aligned).
double normal_draw(Rng& rng);

}  // namespace pfsm
