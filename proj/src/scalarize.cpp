#include "pfsm/scalarize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pfsm {

namespace {

// Entropy of one index given its normalized values r_i (larger = better).
double entropy(const std::vector<double>& r) {
  double sum = 0.0;
  for (double v : r) sum += v;
  if (sum <= 0.0) return 1.0;  // constant index carries no information
  double h = 0.0;
  for (double v : r) {
    const double p = v / sum;
    if (p > 0.0) h -= p * std::log(p);
  }
  return h / std::log(static_cast<double>(r.size()));
}

double span_or_one(double lo, double hi) { return hi > lo ? hi - lo : 1.0; }

}  // namespace

EwmWeights ewm_weights(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 2) throw std::invalid_argument("ewm_weights: need at least 2 samples");
  double tmin = samples[0].first, tmax = tmin, zmin = samples[0].second, zmax = zmin;
  for (const auto& [t, z] : samples) {
    tmin = std::min(tmin, t);
    tmax = std::max(tmax, t);
    zmin = std::min(zmin, z);
    zmax = std::max(zmax, z);
  }
  std::vector<double> rz, rt;
  for (const auto& [t, z] : samples) {
    rz.push_back(zmax > zmin ? (z - zmin) / (zmax - zmin) : 0.0);
    rt.push_back(tmax > tmin ? (tmax - t) / (tmax - tmin) : 0.0);
  }
  EwmWeights w;
  w.samples = static_cast<int>(samples.size());
  w.e1 = std::clamp(entropy(rz), 0.0, 1.0);
  w.e2 = std::clamp(entropy(rt), 0.0, 1.0);
  const double d1 = 1.0 - w.e1, d2 = 1.0 - w.e2;
  if (d1 + d2 <= 0.0) {
    w.degenerate = true;
    w.w1 = w.w2 = 0.5;
  } else {
    w.w1 = d1 / (d1 + d2);
    w.w2 = 1.0 - w.w1;
  }
  return w;
}

double NormBounds::z_norm(double z) const { return (z - z_min) / span_or_one(z_min, z_max); }
double NormBounds::t_norm(double t) const { return (t - t_min) / span_or_one(t_min, t_max); }

Fitness Scalarizer::operator()(double z, double t, double violation, bool feasible) const {
  Fitness f;
  f.z_norm = bounds.z_norm(z);
  f.t_norm = bounds.t_norm(t);
  f.feasible = feasible;
  const double base = weights.w1 * f.z_norm - weights.w2 * f.t_norm;
  if (!feasible) {
    // The offset keeps infeasible schemes below feasible ones even when the
    // residual sum is tiny.
    f.penalty = mode == PenaltyMode::death ? std::numeric_limits<double>::max() / 4
                                           : penalty_coefficient * (1.0 + violation);
  }
  f.F = mode == PenaltyMode::death && !feasible ? -f.penalty : base - f.penalty;
  return f;
}

std::pair<double, double> profit_bounds(const Instance& inst) {
  double eta_max = 0.0, km_max = 0.0, buy_max = 0.0;
  for (const auto& vt : inst.vehicle_types) {
    eta_max = std::max(eta_max, vt.per_km_fare);
    km_max = std::max(km_max, vt.running_cost_per_km);
    buy_max = std::max(buy_max, vt.purchasing_cost_per_day);
  }
  double revenue = 0.0;
  for (const auto& d : inst.demand) {
    const double km = inst.path_km(inst.runs[inst.run_index(d.run)].line, d.from, d.to);
    const double fp = std::max(inst.fares.passenger_base + eta_max * km, inst.fares.passenger_base);
    const double ff = inst.fares.freight_base + inst.fares.freight_per_km * km;
    revenue += d.passengers * fp + d.parcels * ff;
  }
  double cost = inst.fleet_size * buy_max;
  double toll_max = 0.0;
  for (double r : inst.toll.rates) toll_max = std::max(toll_max, r);
  double longest_chain = 0.0;
  for (const auto& c : inst.run_chains()) longest_chain = std::max(longest_chain, static_cast<double>(c.size()));
  for (int ri = 0; ri < inst.run_count(); ++ri) {
    const int line = inst.runs[ri].line;
    cost += inst.full_span_km(line) * km_max;
    if (inst.toll.enabled) cost += toll_max * inst.line(line).toll_km;
  }
  // Dwell: every passenger may wait through every run of a line, and each
  // parcel is handled twice.
  const double dwell_s = inst.dwell.seconds_per_passenger * inst.total_passengers() * (2.0 + longest_chain) +
                         inst.dwell.seconds_per_parcel * 2.0 * inst.total_parcels();
  cost += inst.dwell.cost_per_hour / 3600.0 * dwell_s;
  return {-cost, revenue};
}

double dominance_coefficient(const Instance& inst, const EwmWeights& w, const NormBounds& b) {
  const auto [zlo, zhi] = profit_bounds(inst);
  // Feasible average time lies in [0, T_max].
  const double spread = w.w1 * (zhi - zlo) / span_or_one(b.z_min, b.z_max) +
                        w.w2 * inst.limits.t_max_min / span_or_one(b.t_min, b.t_max);
  return 1.1 * spread + 1.0;
}

Scalarizer fit_scalarizer(const Instance& inst, const std::vector<std::pair<double, double>>& samples,
                          std::optional<double> penalty_coefficient, PenaltyMode mode) {
  Scalarizer s;
  s.weights = ewm_weights(samples);
  s.bounds.t_min = s.bounds.t_max = samples.at(0).first;
  s.bounds.z_min = s.bounds.z_max = samples.at(0).second;
  for (const auto& [t, z] : samples) {
    s.bounds.t_min = std::min(s.bounds.t_min, t);
    s.bounds.t_max = std::max(s.bounds.t_max, t);
    s.bounds.z_min = std::min(s.bounds.z_min, z);
    s.bounds.z_max = std::max(s.bounds.z_max, z);
  }
  s.mode = mode;
  s.penalty_coefficient = penalty_coefficient ? *penalty_coefficient : dominance_coefficient(inst, s.weights, s.bounds);
  return s;
}

}  // namespace pfsm
