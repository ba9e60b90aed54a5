#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "pfsm/model.hpp"

namespace pfsm {

struct EwmWeights {
  double w1 = 0.5;  // profit Z
  double w2 = 0.5;  // average travel time
  double e1 = 1.0;  // entropies
  double e2 = 1.0;
  int samples = 0;
  bool degenerate = false;  // both indices constant; equal weights used
};

// Entropy weights from (T, Z) samples. Z is min-max normalized directly and T
// inverted so that larger is better for both. Throws for fewer than 2 samples.
EwmWeights ewm_weights(const std::vector<std::pair<double, double>>& samples);

struct NormBounds {
  double z_min = 0.0, z_max = 1.0;
  double t_min = 0.0, t_max = 1.0;

  // Linear in the value, extrapolated outside the sample range.
  double z_norm(double z) const;
  double t_norm(double t) const;
};

enum class PenaltyMode : std::uint8_t { linear, death };

struct Fitness {
  double F = 0.0;
  double z_norm = 0.0;
  double t_norm = 0.0;
  double penalty = 0.0;
  bool feasible = true;
};

struct Scalarizer {
  EwmWeights weights;
  NormBounds bounds;
  double penalty_coefficient = 1.0;
  PenaltyMode mode = PenaltyMode::linear;

  // violation: dimensionless residual sum (0 when feasible).
  Fitness operator()(double z, double t, double violation, bool feasible) const;
};

// Loose a-priori bounds on Z over every decodable scheme of the instance.
std::pair<double, double> profit_bounds(const Instance& inst);

// Smallest coefficient that keeps every infeasible scheme below every feasible
// one for the given weights and bounds, with a safety margin.
double dominance_coefficient(const Instance& inst, const EwmWeights& w, const NormBounds& b);

// Fits weights and bounds on (T, Z) samples. The penalty coefficient defaults
// to dominance_coefficient.
Scalarizer fit_scalarizer(const Instance& inst, const std::vector<std::pair<double, double>>& samples,
                          std::optional<double> penalty_coefficient = std::nullopt,
                          PenaltyMode mode = PenaltyMode::linear);

}  // namespace pfsm
