#pragma once
// Randomized invariant suites. Shared by the gtest cases and the acceptance
// binary so both report on exactly the same checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "pfsm/economics.hpp"
#include "pfsm/encoding.hpp"
#include "pfsm/evaluate.hpp"
#include "pfsm/operators.hpp"
#include "pfsm/optimize.hpp"
#include "pfsm/rng.hpp"
#include "pfsm/scalarize.hpp"
#include "pfsm/service_time.hpp"

namespace pfsm::testing {

struct SuiteResult {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::string first_failure;

  bool ok() const { return cases >= 100 && failures == 0; }
  void check(bool cond, const std::string& what) {
    if (cond) return;
    if (failures++ == 0) first_failure = what;
  }
};

inline std::string describe(const SuiteResult& r) {
  std::ostringstream os;
  os << r.name << ": " << r.cases << " cases, " << r.failures << " failures";
  if (r.failures) os << " (first: " << r.first_failure << ")";
  return os.str();
}

inline bool close(double a, double b, double rel = 1e-9) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

// All bundled instances plus the hand case, loaded once.
inline const std::vector<Instance>& property_instances() {
  static const std::vector<Instance> v = [] {
    std::vector<Instance> out;
    out.push_back(load_instance_file(data_path("micro.json")));
    out.push_back(load_instance_file(data_path("yushe.json")));
    out.push_back(load_instance_file(data_path("simnet.json")));
    out.push_back(hand_instance());
    return out;
  }();
  return v;
}

// Uniform point in the box widened by `spill` box widths on each side.
inline Position random_position(const SearchSpace& sp, Rng& rng, double spill = 0.0) {
  Position x(sp.dim());
  for (int d = 0; d < sp.dim(); ++d) {
    const double w = sp.upper[d] - sp.lower[d];
    x[d] = sp.lower[d] - spill * w + rng.uniform() * (1.0 + 2.0 * spill) * w;
  }
  return x;
}

inline std::string where(const Instance& inst, int k) { return inst.name + " case " + std::to_string(k); }

inline SuiteResult profit_identity_suite(int n = 200, std::uint64_t seed = 11) {
  SuiteResult r{"profit identity"};
  const auto& insts = property_instances();
  Rng rng(seed);
  for (int k = 0; k < n; ++k, ++r.cases) {
    const Instance& inst = insts[k % insts.size()];
    const Evaluator ev(inst, {k % 2 ? FareMode::literal : FareMode::described});
    const Evaluation e = ev.evaluate(random_position(ev.space(), rng));
    const CostBreakdown& c = e.costs;
    r.check(close(c.profit, c.passenger_revenue + c.freight_revenue - c.toll - c.dwell - c.running - c.purchasing),
            where(inst, k) + ": Z != E - C");
    // Fleet cost straight from the catalog.
    double fix = 0.0, km = 0.0;
    for (int t : e.solution.type_of_bus) fix += inst.vehicle_types[t].purchasing_cost_per_day;
    for (int ri = 0; ri < inst.run_count(); ++ri)
      km += run_distance(inst, ri, true) * inst.vehicle_types[e.solution.type_of_run(ri)].running_cost_per_km;
    r.check(close(c.purchasing, fix), where(inst, k) + ": C_fix");
    r.check(close(c.running, km), where(inst, k) + ": C_km");
    r.check(c.toll >= 0 && c.dwell >= 0 && c.passenger_revenue >= 0 && c.freight_revenue >= 0,
            where(inst, k) + ": negative term");
  }
  return r;
}

inline SuiteResult time_decomposition_suite(int n = 200, std::uint64_t seed = 12) {
  SuiteResult r{"T decomposition"};
  const auto& insts = property_instances();
  Rng rng(seed);
  for (int k = 0; k < n; ++k, ++r.cases) {
    const Instance& inst = insts[k % insts.size()];
    const Evaluator ev(inst, {FareMode::described, k % 3 == 2 ? WaitMode::literal : WaitMode::waiting});
    const Solution sol = decode(random_position(ev.space(), rng), ev.space(), inst);
    const RunTimeline tl = ev.timeline(sol);
    const TimeBreakdown t = time_breakdown(inst, tl, ev.options().wait_mode);
    r.check(close(t.total, t.cruise + t.dwell + t.wait + t.detention), where(inst, k) + ": T != sum of parts");
    r.check(t.cruise >= 0 && t.dwell >= 0 && t.wait >= 0 && t.detention >= 0, where(inst, k) + ": negative part");
    r.check(t.passengers == inst.total_passengers(), where(inst, k) + ": passenger count");
    if (t.passengers > 0) r.check(close(t.avg * t.passengers, t.total), where(inst, k) + ": avg");
    // Nobody left behind: each rider is on their own run, so cruise is the
    // demand-weighted path time.
    long detained = tl.stranded_passengers;
    for (const RunTrace& rt : tl.runs)
      for (const StopEvent& se : rt.stops) detained += se.detained;
    if (detained == 0) {
      double cruise = 0.0;
      for (const DemandRecord& d : inst.demand)
        if (d.passengers) cruise += d.passengers * segment_time(inst, inst.run_index(d.run), d.from, d.to).mean;
      r.check(close(t.cruise, cruise, 1e-9), where(inst, k) + ": cruise oracle");
      r.check(t.detention == 0.0, where(inst, k) + ": detention without detainees");
    }
  }
  return r;
}

inline SuiteResult timeline_suite(int n = 200, std::uint64_t seed = 13) {
  SuiteResult r{"timeline causality and conservation"};
  const auto& insts = property_instances();
  Rng rng(seed);
  for (int k = 0; k < n; ++k, ++r.cases) {
    const Instance& inst = insts[k % insts.size()];
    const Evaluator ev(inst);
    const Solution sol = decode(random_position(ev.space(), rng), ev.space(), inst);
    const RunTimeline tl = ev.timeline(sol);
    const std::vector<int> seats = bus_seats(inst, sol);
    long boarded_all = 0;
    for (int ri = 0; ri < inst.run_count(); ++ri) {
      const RunTrace& rt = tl.runs[ri];
      const std::string at = where(inst, k) + " run " + std::to_string(inst.runs[ri].id);
      r.check(rt.seats == seats[sol.bus_of_run[ri] - 1], at + ": seats");
      long onboard = 0, up = 0, down = 0, pon = 0, poff = 0;
      double vol = 0.0;
      for (std::size_t s = 0; s < rt.stops.size(); ++s) {
        const StopEvent& e = rt.stops[s];
        r.check(e.departure >= e.arrival, at + ": departs before arriving");
        r.check(std::abs(60.0 * (e.departure - e.arrival) - e.dwell_s) < 1e-6, at + ": dwell");
        if (s > 0) {
          const StopEvent& p = rt.stops[s - 1];
          r.check(e.arrival > p.departure, at + ": arrival not after previous departure");
        }
        onboard += e.boarded - e.alighted;
        vol += (e.parcels_loaded - e.parcels_unloaded) * inst.parcel_volume_m3;
        r.check(onboard == e.onboard, at + ": onboard balance");
        r.check(onboard >= 0 && onboard <= rt.seats, at + ": onboard out of [0, seats]");
        r.check(std::abs(vol - e.onboard_volume) < 1e-9, at + ": parcel volume balance");
        r.check(e.waiting - e.boarded == e.detained && e.detained >= 0, at + ": detained != waiting - boarded");
        r.check(e.boarded <= e.remaining_seats, at + ": boarded beyond remaining seats");
        up += e.boarded;
        down += e.alighted;
        pon += e.parcels_loaded;
        poff += e.parcels_unloaded;
      }
      r.check(up == down, at + ": boarded != alighted");
      r.check(pon == poff, at + ": parcels loaded != unloaded");
      r.check(onboard == 0, at + ": riders left on board");
      boarded_all += up;
    }
    r.check(boarded_all + tl.stranded_passengers == inst.total_passengers(), where(inst, k) + ": passengers lost");
  }
  return r;
}

inline SuiteResult structural_suite(int n = 200, std::uint64_t seed = 14) {
  SuiteResult r{"decode structure"};
  const auto& insts = property_instances();
  Rng rng(seed);
  for (int k = 0; k < n; ++k, ++r.cases) {
    const Instance& inst = insts[k % insts.size()];
    const SearchSpace sp = make_search_space(inst);
    const Solution s = decode(random_position(sp, rng, 0.5), sp, inst);
    const std::string at = where(inst, k);
    r.check(static_cast<int>(s.bus_of_run.size()) == inst.run_count(), at + ": one bus per run");
    r.check(s.bus_count() == inst.fleet_size, at + ": fleet size");
    for (int b : s.bus_of_run) r.check(b >= 1 && b <= s.bus_count(), at + ": bus out of range");
    for (int t : s.type_of_bus) r.check(t >= 0 && t < inst.type_count(), at + ": type out of range");
    for (int l : s.lambda_pct) {
      const bool on_grid = l == 100 || (l >= sp.lambda_min_pct && (l - sp.lambda_min_pct) % sp.lambda_step_pct == 0);
      r.check(on_grid && l <= 100, at + ": lambda " + std::to_string(l) + " not admissible");
    }
    int overlaps_seen = 0;
    for (int a = 0; a < inst.run_count(); ++a)
      for (int b = a + 1; b < inst.run_count(); ++b)
        if (s.bus_of_run[a] == s.bus_of_run[b] && overlaps(inst.runs[a], inst.runs[b])) ++overlaps_seen;
    if (s.unresolved_conflicts == 0) {
      r.check(overlaps_seen == 0, at + ": bus serves overlapping runs");
      r.check(decode(encode(s, sp), sp, inst) == s, at + ": encode/decode not idempotent");
    } else {
      r.check(overlaps_seen > 0, at + ": conflict reported but none present");
    }
  }
  return r;
}

inline SuiteResult wrap_suite(int n = 500, std::uint64_t seed = 15) {
  SuiteResult r{"wrap idempotence"};
  Rng rng(seed);
  for (int k = 0; k < n; ++k, ++r.cases) {
    const int d = 1 + rng.below(20);
    Position lo(d), hi(d), x(d);
    for (int j = 0; j < d; ++j) {
      lo[j] = -50.0 + 100.0 * rng.uniform();
      hi[j] = lo[j] + 0.1 + 30.0 * rng.uniform();
      const double w = hi[j] - lo[j];
      // Mostly within two spans, sometimes far out (clamped).
      const double spill = k % 5 == 0 ? 10.0 : 2.0;
      x[j] = lo[j] - spill * w + rng.uniform() * (1.0 + 2.0 * spill) * w;
    }
    Position y = x;
    wrap_bounds(y, lo, hi);
    for (int j = 0; j < d; ++j) r.check(y[j] >= lo[j] && y[j] <= hi[j], "case " + std::to_string(k) + ": outside box");
    Position z = y;
    wrap_bounds(z, lo, hi);
    r.check(z == y, "case " + std::to_string(k) + ": second wrap moved the point");
    for (int j = 0; j < d; ++j)
      if (x[j] >= lo[j] && x[j] <= hi[j]) r.check(y[j] == x[j], "case " + std::to_string(k) + ": inside point moved");
  }
  return r;
}

// Greedy selection never loses ground: one explicit DE generation per case,
// plus the full IJS trace on the micro instance.
inline SuiteResult de_nondecrease_suite(int n = 100, std::uint64_t seed = 16) {
  SuiteResult r{"DE non-decrease"};
  const auto& insts = property_instances();
  const Instance& micro = insts[0];
  const Instance& yushe = insts[1];
  const Evaluator ev(yushe);
  const Scalarizer sc = reference_scalarizer(yushe, {}, 200);
  auto F = [&](const Position& p) {
    const Evaluation e = ev.evaluate(p);
    return sc(e.Z(), e.T(), e.violation, e.feasible).F;
  };
  const SearchSpace& sp = ev.space();
  for (int k = 0; k < n; ++k, ++r.cases) {
    const std::string at = "case " + std::to_string(k);
    Rng rng = substream(seed, k);
    std::vector<Position> pop;
    std::vector<double> fit;
    for (int i = 0; i < 6; ++i) {
      pop.push_back(random_position(sp, rng));
      fit.push_back(F(pop.back()));
    }
    const int best = static_cast<int>(std::max_element(fit.begin(), fit.end()) - fit.begin());
    const Position lead = pop[best];
    for (int i = 0; i < 6; ++i) {
      int j = 0, kk = 0;
      do j = rng.below(6);
      while (j == i);
      do kk = rng.below(6);
      while (kk == i || kk == j);
      Position u = de_crossover(pop[i], de_mutant_to_best(pop[i], lead, pop[j], pop[kk], rng.uniform()), 0.5, rng);
      wrap_bounds(u, sp.lower, sp.upper);
      const double fu = F(u);
      const double before = fit[i];
      if (fu >= fit[i]) {
        pop[i] = u;
        fit[i] = fu;
      }
      r.check(fit[i] >= before, at + ": member got worse");
    }

    SolverConfig cfg;
    cfg.population = 10;
    cfg.iterations = 10;
    cfg.seed = 1000 + k;
    cfg.parallel = false;
    const OptimizeResult res = optimize(micro, cfg);
    double prev = res.trace.initial_best_F;
    for (const TraceRow& row : res.trace.rows) {
      r.check(row.best_F >= prev, at + ": IJS best F decreased at iteration " + std::to_string(row.iter));
      prev = row.best_F;
    }
    r.check(res.fitness.F == prev, at + ": final F differs from trace");
  }
  return r;
}

inline SuiteResult ewm_suite(int n = 200, std::uint64_t seed = 17) {
  SuiteResult r{"EWM weights and scaling"};
  const Instance& inst = property_instances()[0];
  Rng rng(seed);
  for (int k = 0; k < n; ++k, ++r.cases) {
    const std::string at = "case " + std::to_string(k);
    const int m = 3 + rng.below(40);
    std::vector<std::pair<double, double>> s, scaled;
    const double a = 0.1 + 10.0 * rng.uniform(), b = 0.1 + 10.0 * rng.uniform();
    for (int i = 0; i < m; ++i) {
      s.emplace_back(20.0 + 40.0 * rng.uniform(), -1000.0 + 2000.0 * rng.uniform());
      scaled.emplace_back(a * s.back().first, b * s.back().second);
    }
    const EwmWeights w = ewm_weights(s);
    r.check(std::abs(w.w1 + w.w2 - 1.0) <= 1e-12, at + ": weights do not sum to 1");
    r.check(w.w1 >= 0 && w.w2 >= 0 && w.e1 >= 0 && w.e1 <= 1 && w.e2 >= 0 && w.e2 <= 1, at + ": out of [0, 1]");
    const EwmWeights ws = ewm_weights(scaled);
    r.check(std::abs(ws.w1 - w.w1) <= 1e-9, at + ": weights changed under scaling");
    const Scalarizer f1 = fit_scalarizer(inst, s), f2 = fit_scalarizer(inst, scaled);
    int arg1 = 0, arg2 = 0;
    double best1 = -1e300, best2 = -1e300;
    for (int i = 0; i < m; ++i) {
      const double v1 = f1(s[i].second, s[i].first, 0.0, true).F;
      const double v2 = f2(scaled[i].second, scaled[i].first, 0.0, true).F;
      if (v1 > best1) best1 = v1, arg1 = i;
      if (v2 > best2) best2 = v2, arg2 = i;
    }
    r.check(arg1 == arg2, at + ": argmax moved under scaling");
  }
  return r;
}

// A chaotic orbit is not an iid stream, so single-population chi-square values
// run a little heavier than the textbook tail: each population is checked at a
// Bonferroni-corrected level, and the pooled counts at p = 0.001.
inline SuiteResult tent_suite(int n = 100, std::uint64_t seed = 18) {
  SuiteResult r{"tent map range and uniformity"};
  constexpr double kCritCase = 37.33;   // 9 dof, p = 1e-5
  constexpr double kCritPooled = 27.88; // 9 dof, p = 0.001
  const Position lo(10, 0.0), hi(10, 1.0);
  long pooled[10] = {};
  auto chi2 = [](const long* bins, double expected) {
    double c = 0.0;
    for (int i = 0; i < 10; ++i) c += (bins[i] - expected) * (bins[i] - expected) / expected;
    return c;
  };
  for (int k = 0; k < n; ++k, ++r.cases) {
    const std::string at = "case " + std::to_string(k);
    double x = chaos_seed(seed + k);
    for (int i = 0; i < 60; ++i) {
      x = tent_map(x);
      r.check(x >= 0.0 && x <= 1.0, at + ": tent orbit left [0, 1]");
    }
    const auto pop = init_population_tent(100, lo, hi, seed + k);
    long bins[10] = {};
    for (const auto& p : pop)
      for (double v : p) {
        r.check(v >= 0.0 && v <= 1.0, at + ": population outside the box");
        const int b = std::min(9, static_cast<int>(v * 10));
        ++bins[b];
        ++pooled[b];
      }
    const double c = chi2(bins, 100.0);
    r.check(c < kCritCase, at + ": chi2 " + std::to_string(c));
  }
  const double c = chi2(pooled, 100.0 * n);
  r.check(c < kCritPooled, "pooled chi2 " + std::to_string(c));
  return r;
}

inline SuiteResult quantile_suite(int n = 300, std::uint64_t seed = 19) {
  SuiteResult r{"quantile/CDF round trip"};
  Rng rng(seed);
  for (int k = 0; k < n; ++k, ++r.cases) {
    const std::string at = "case " + std::to_string(k);
    const double p = 0.001 + 0.998 * rng.uniform();
    r.check(std::abs(normal_cdf(normal_quantile(p)) - p) < 1e-12, at + ": cdf(quantile(p)) != p");
    SegmentTimeStats st;
    st.mean = 1.0 + 60.0 * rng.uniform();
    st.std = 0.05 + 10.0 * rng.uniform();
    const double gamma = k % 2 ? 0.85 : 0.5 + 0.499 * rng.uniform() + 1e-6;
    r.check(std::abs(reliability(st, time_budget(st, gamma)) - gamma) < 1e-12, at + ": R(T^(gamma)) != gamma");
  }
  return r;
}

inline SuiteResult bpr_suite(int n = 300, std::uint64_t seed = 20) {
  SuiteResult r{"BPR monotone congestion"};
  Rng rng(seed);
  for (int k = 0; k < n; ++k, ++r.cases) {
    const std::string at = "case " + std::to_string(k);
    BprParams bpr;
    bpr.beta = rng.uniform();
    bpr.power = 1.0 + 5.0 * rng.uniform();
    const double a = 1.0 + 30.0 * rng.uniform(), c = 1.0 + 2000.0 * rng.uniform();
    double q1 = 3.0 * c * rng.uniform(), q2 = 3.0 * c * rng.uniform();
    if (q1 > q2) std::swap(q1, q2);
    const double m1 = bpr_segment(a, q1, c, bpr, 0.0).mean, m2 = bpr_segment(a, q2, c, bpr, 0.0).mean;
    r.check(m1 >= a && m2 >= m1, at + ": mean not monotone in volume");
    const double c2 = c * (1.0 + rng.uniform());
    r.check(bpr_segment(a, q2, c2, bpr, 0.0).mean <= m2, at + ": more capacity made it slower");
  }
  return r;
}

inline std::vector<SuiteResult> all_property_suites() {
  return {profit_identity_suite(), time_decomposition_suite(), timeline_suite(), structural_suite(),
          wrap_suite(),            de_nondecrease_suite(),     ewm_suite(),      tent_suite(),
          quantile_suite(),        bpr_suite()};
}

}  // namespace pfsm::testing
