#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "pfsm/economics.hpp"
#include "pfsm/evaluate.hpp"

using namespace pfsm;
using namespace pfsm::testing;

namespace {

// Bus 1..6 as published: small 100%, small 100%, medium 80%, large 50%,
// medium 90%, large 70%; runs paired 1-5, 2-4, 3-6, 7-10, 8-11, 9-12.
Solution published_scheme() {
  Solution s;
  s.bus_of_run = {1, 2, 3, 2, 1, 3, 4, 5, 6, 4, 5, 6};
  s.type_of_bus = {0, 0, 1, 2, 1, 2};
  s.lambda_pct = {100, 100, 80, 50, 90, 70};
  return s;
}

VehicleType vt(double cap) {
  VehicleType v;
  v.capacity_m3 = cap;
  return v;
}

TollTable toll_table() {
  TollTable t;
  t.enabled = true;
  t.rates = {0.5, 0.8, 1.0, 1.2};
  t.seat_thresholds = {10, 20, 30};
  return t;
}

}  // namespace

TEST(Seats, FloorOfPassengerVolume) {
  EXPECT_EQ(seat_count(vt(20.3), 0.5, 1.0), 10);
  EXPECT_EQ(seat_count(vt(13.56), 1.0, 1.0), 13);
  EXPECT_EQ(seat_count(vt(13.56), 0.0, 1.0), 0);
  // 0.3 * 20 / 0.5 is 11.999... in floating point; percent arithmetic is exact.
  EXPECT_EQ(seat_count_pct(vt(20.0), 30, 0.5), 12);
  EXPECT_EQ(seat_count_pct(vt(4.0), 50, 0.5), 4);
}

TEST(Toll, DisabledIsFree) {
  const Instance inst = load_instance_file(data_path("yushe.json"));
  EXPECT_DOUBLE_EQ(toll_cost(inst, published_scheme()), 0.0);
}

TEST(Toll, BoundaryFallsInLowerClass) {
  const TollTable t = toll_table();
  EXPECT_EQ(toll_class(t, 10), 0);
  EXPECT_DOUBLE_EQ(toll_per_run(t, 10, 20.0), 10.0);
  EXPECT_EQ(toll_class(t, 11), 1);
  EXPECT_EQ(toll_class(t, 30), 2);
  EXPECT_EQ(toll_class(t, 31), 3);
  EXPECT_DOUBLE_EQ(toll_per_run(t, 31, 20.0), 24.0);
}

TEST(Toll, ChargedPerRunOnTollKm) {
  Instance inst = hand_instance();
  inst.toll = toll_table();
  inst.lines[0].toll_km = 4.0;
  inst.finalize();
  // 4 seats each -> class 1 at 0.5 per toll-km, two runs.
  EXPECT_DOUBLE_EQ(toll_cost(inst, hand_solution()), 2 * 0.5 * 4.0);
}

TEST(DwellCost, UnitConversion) {
  EXPECT_DOUBLE_EQ(dwell_cost(30.0, 3600.0), 30.0);
  EXPECT_DOUBLE_EQ(dwell_cost(30.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(dwell_cost(60.0, 24.0 + 36.0), 1.0);
}

TEST(FleetCost, PublishedFleet) {
  const Instance inst = load_instance_file(data_path("yushe.json"));
  const FleetCosts c = fixed_and_running_cost(inst, published_scheme());
  EXPECT_NEAR(c.purchasing, 3211.08, 1e-9);
  // By hand: parcel runs add their 5 km detour.
  const double km = 4 * 40.24 * 0.4                 // buses 1-2, small
                    + 2 * 45.24 * 0.6               // bus 3, medium, runs 3 and 6 carry parcels
                    + 2 * 42.33 * 0.8 * 2           // buses 4 and 6, large, parcel runs
                    + 2 * 37.33 * 0.6;              // bus 5, medium, no parcels
  EXPECT_NEAR(c.running, km, 1e-9);
}

TEST(FleetCost, SingleMediumRun) {
  Instance inst = hand_instance();
  inst.vehicle_types[0].running_cost_per_km = 0.6;
  inst.finalize();
  Solution s = hand_solution();
  EXPECT_NEAR(fixed_and_running_cost(inst, s).running, 2 * 10.0 * 0.6, 1e-12);
}

TEST(Fares, PassengerBranches) {
  Fares f;
  f.passenger_base = 2.5;
  f.passenger_base_km = 5.0;
  EXPECT_DOUBLE_EQ(passenger_fare(f, 0.22, 3.0, FareMode::described), 2.5);
  EXPECT_NEAR(passenger_fare(f, 0.22, 3.0, FareMode::literal), 3.16, 1e-12);
  EXPECT_NEAR(passenger_fare(f, 0.22, 15.0, FareMode::described), 2.5 + 0.22 * 10.0, 1e-12);
  EXPECT_NEAR(passenger_fare(f, 0.22, 15.0, FareMode::literal), 2.5 + 0.22 * 10.0, 1e-12);
}

TEST(Fares, FreightBranches) {
  Fares f;
  f.freight_base = 1.0;
  f.freight_per_km = 0.05;
  f.freight_base_km = 5.0;
  EXPECT_NEAR(freight_fare(f, 10.0, FareMode::described), 1.25, 1e-12);
  EXPECT_DOUBLE_EQ(freight_fare(f, 4.0, FareMode::described), 1.0);
}

TEST(Revenue, FreightIsLinearInParcels) {
  Instance inst = load_instance_file(data_path("micro.json"));
  // 50 parcels over 18 km and 20 over 8 km, base 1 for 4 km, 0.05 beyond.
  EXPECT_NEAR(freight_revenue(inst, FareMode::described), 50 * 1.7 + 20 * 1.2, 1e-9);
  for (DemandRecord& d : inst.demand) d.parcels *= 100;
  inst.finalize();
  EXPECT_NEAR(freight_revenue(inst, FareMode::described), 100 * (50 * 1.7 + 20 * 1.2), 1e-6);
}

TEST(Revenue, PassengerBruteForce) {
  const Instance inst = load_instance_file(data_path("yushe.json"));
  const Solution s = published_scheme();
  for (FareMode mode : {FareMode::described, FareMode::literal}) {
    double expect = 0.0;
    for (const DemandRecord& d : inst.demand) {
      if (!d.passengers) continue;
      const pfsm::Run& run = inst.runs[inst.run_index(d.run)];
      const double eta = inst.vehicle_types[s.type_of_run(inst.run_index(d.run))].per_km_fare;
      const double km = inst.path_km(run.line, d.from, d.to);
      const double lu = inst.fares.passenger_base_km;
      double fare = inst.fares.passenger_base;
      if (km > lu) fare += eta * (km - lu);
      else if (mode == FareMode::literal) fare += eta * km;
      expect += d.passengers * fare;
    }
    EXPECT_NEAR(passenger_revenue(inst, s, mode), expect, 1e-9);
  }
}

TEST(Revenue, CalibratedYusheMatchesPublished) {
  const Instance inst = load_instance_file(data_path("yushe.json"));
  Solution medium = published_scheme();
  medium.type_of_bus.assign(6, 1);
  // The calibration targets: E_u with all-medium buses, E_f implied by Z + C - E_u.
  EXPECT_NEAR(passenger_revenue(inst, medium, FareMode::described), 991.82, 0.5);
  EXPECT_NEAR(freight_revenue(inst, FareMode::described), 3257.64, 0.5);
}

TEST(Residuals, PublishedSchemeIsFeasible) {
  const Instance inst = load_instance_file(data_path("yushe.json"));
  const Evaluator ev(inst);
  const Evaluation e = ev.evaluate(published_scheme());
  EXPECT_TRUE(e.residuals.feasible());
  EXPECT_TRUE(e.feasible);
  EXPECT_EQ(e.violation, 0.0);
  EXPECT_EQ(e.residuals.total_passenger_overload(), 0.0);
  EXPECT_EQ(e.residuals.total_freight_overload(), 0.0);
  EXPECT_GT(e.Z(), 0.0);
}

TEST(Residuals, LambdaBelowMinimum) {
  const Instance inst = load_instance_file(data_path("yushe.json"));
  Solution s = published_scheme();
  s.lambda_pct[0] = 10;
  const RunTimeline tl = simulate_timeline(inst, s);
  const ConstraintResiduals r = constraint_residuals(inst, s, tl, 0.0);
  EXPECT_NEAR(r.lambda_violation, 0.3, 1e-12);
  EXPECT_FALSE(r.feasible());
}

TEST(Residuals, PassengerOverload) {
  const Instance inst = hand_instance();
  const Solution s = hand_solution();
  RunTimeline tl = simulate_timeline(inst, s);
  tl.runs[0].seats = 10;
  tl.runs[0].peak_onboard = 15;
  const ConstraintResiduals r = constraint_residuals(inst, s, tl, 0.0);
  EXPECT_DOUBLE_EQ(r.passenger_overload[0], 5.0);
  EXPECT_DOUBLE_EQ(r.stranded_passengers, 1.0);
}

TEST(Residuals, TimeLimit) {
  const Instance inst = hand_instance();
  const Solution s = hand_solution();
  const RunTimeline tl = simulate_timeline(inst, s);
  EXPECT_DOUBLE_EQ(constraint_residuals(inst, s, tl, inst.limits.t_max_min + 2.5).avg_time_excess, 2.5);
  EXPECT_DOUBLE_EQ(constraint_residuals(inst, s, tl, inst.limits.t_max_min).avg_time_excess, 0.0);
}

TEST(Profit, ZeroDemandLosesFleetCost) {
  Instance inst = hand_instance();
  inst.demand.clear();
  inst.finalize();
  const Solution s = hand_solution();
  const CostBreakdown c = profit(inst, s, simulate_timeline(inst, s), FareMode::described);
  EXPECT_EQ(c.passenger_revenue, 0.0);
  EXPECT_EQ(c.freight_revenue, 0.0);
  EXPECT_EQ(c.dwell, 0.0);
  EXPECT_DOUBLE_EQ(c.profit, -(2 * 10.0) - (2 * 10.0 * 1.0));
}

TEST(Profit, HandCase) {
  const Instance inst = hand_instance();
  const Solution s = hand_solution();
  const CostBreakdown c = profit(inst, s, simulate_timeline(inst, s), FareMode::described);
  // Fares: base 2 up to 3 km, 0.1 per km beyond. 1->3 is 10 km, the others 5.
  const double eu = 3 * 2.7 + 2 * 2.2 + 4 * 2.2 + 1 * 2.7 + 1 * 2.2;
  EXPECT_NEAR(c.passenger_revenue, eu, 1e-12);
  EXPECT_NEAR(c.dwell, kHandTotalDwellS / 3600.0 * 30.0, 1e-12);
  EXPECT_NEAR(c.profit, eu - c.dwell - 20.0 - 20.0, 1e-12);
}
