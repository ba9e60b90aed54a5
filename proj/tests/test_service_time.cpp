#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "fixtures.hpp"
#include "pfsm/service_time.hpp"

using namespace pfsm;
using namespace pfsm::testing;

namespace {

BprParams bpr(double beta = 0.15, double z = 4.0) {
  BprParams p;
  p.beta = beta;
  p.power = z;
  return p;
}

void expect_stop(const StopEvent& got, const HandStop& want, const std::string& at) {
  // "To the second": all times agree within 1/60 min; ours are exact.
  EXPECT_NEAR(got.arrival, want.arrival, 1e-9) << at;
  EXPECT_NEAR(got.departure, want.departure, 1e-9) << at;
  EXPECT_NEAR(got.dwell_s, want.dwell_s, 1e-9) << at;
  EXPECT_EQ(got.alighted, want.alighted) << at;
  EXPECT_EQ(got.boarded, want.boarded) << at;
  EXPECT_EQ(got.new_arrivals, want.new_arrivals) << at;
  EXPECT_EQ(got.detained, want.detained) << at;
  EXPECT_NEAR(got.wait_pax_min, want.wait_pax_min, 1e-9) << at;
  EXPECT_NEAR(got.detention_min, want.detention_min, 1e-9) << at;
}

}  // namespace

TEST(Bpr, Examples) {
  EXPECT_NEAR(bpr_segment(10.0, 100.0, 100.0, bpr(), 0.0).mean, 11.5, 1e-12);
  EXPECT_DOUBLE_EQ(bpr_segment(10.0, 0.0, 100.0, bpr(), 0.0).mean, 10.0);
  const SegmentTimeStats s = bpr_segment(10.0, 50.0, 100.0, bpr(), 2.0);
  EXPECT_DOUBLE_EQ(s.std, 2.0);
  EXPECT_DOUBLE_EQ(s.std * s.std, 4.0);
  EXPECT_NEAR(s.mean, 10.0 * (1 + 0.15 * std::pow(0.5, 4)), 1e-12);
  EXPECT_THROW(bpr_segment(10.0, 1.0, 0.0, bpr(), 0.0), std::invalid_argument);
}

TEST(Bpr, PathAddsMeansAndVariances) {
  Instance inst = hand_instance();
  inst.lines[0].segments[0].sigma_min = 3.0;
  inst.lines[0].segments[1].sigma_min = 4.0;
  inst.finalize();
  const SegmentTimeStats s = segment_time(inst, 0, 1, 3);
  EXPECT_DOUBLE_EQ(s.mean, 22.0);
  EXPECT_DOUBLE_EQ(s.std, 5.0);
  EXPECT_DOUBLE_EQ(s.free_flow, 22.0);
}

TEST(TimeBudget, NormalQuantileAt085) {
  EXPECT_NEAR(cornish_fisher_quantile(0.85, 0.0, 0.0), 1.036, 1e-3);
  EXPECT_NEAR(normal_quantile(0.85), 1.0364333894937898, 1e-12);
  SegmentTimeStats s;
  s.mean = 11.5;
  s.std = 2.0;
  // Table value: z(0.85) = 1.03643
  EXPECT_NEAR(time_budget(s, 0.85), 11.5 + 2.0 * 1.03643, 1e-4);
  EXPECT_NEAR(time_budget(s, 0.85), 13.573, 1e-3);
}

TEST(TimeBudget, CornishFisherTerms) {
  // z = 1.0364334, S = 0.5, K = 1 (excess), expanded by hand:
  // z + (z^2 - 1) S / 6 + (z^3 - 3z) K / 24 - (2z^3 - 5z) S^2 / 36
  // = 1.0364334 + 0.0061828 - 0.0831655 + 0.0205244
  EXPECT_NEAR(cornish_fisher_quantile(0.85, 0.5, 1.0), 0.9799751, 1e-6);
  EXPECT_THROW(time_budget(SegmentTimeStats{}, 0.4), std::invalid_argument);
}

TEST(Reliability, Limits) {
  SegmentTimeStats s;
  s.mean = 20.0;
  s.std = 3.0;
  EXPECT_NEAR(reliability(s, 20.0), 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(reliability(s, std::numeric_limits<double>::infinity()), 1.0);
  EXPECT_NEAR(reliability(s, time_budget(s, 0.85)), 0.85, 1e-12);
  s.std = 0.0;
  EXPECT_EQ(reliability(s, 20.0), 1.0);
  EXPECT_EQ(reliability(s, 19.0), 0.0);
}

TEST(StopDwell, LongestActivity) {
  DwellParams d;
  d.seconds_per_passenger = 3.0;
  d.seconds_per_parcel = 5.0;
  EXPECT_DOUBLE_EQ(stop_dwell(d, 5, 10, 8, 4, 0, true), 24.0);
  EXPECT_DOUBLE_EQ(stop_dwell(d, 5, 10, 8, 4, 0, false), 24.0);
  EXPECT_DOUBLE_EQ(stop_dwell(d, 5, 10, 8, 6, 0, true), 30.0);
  EXPECT_DOUBLE_EQ(stop_dwell(d, 0, 0, 8, 0, 0, true), 0.0);
}

TEST(Timeline, HandOracle) {
  const Instance inst = hand_instance();
  const RunTimeline tl = simulate_timeline(inst, hand_solution());
  ASSERT_EQ(tl.runs.size(), 2u);
  for (int r = 0; r < 2; ++r) {
    const HandStop* want = r == 0 ? kHandRun1 : kHandRun2;
    ASSERT_EQ(tl.runs[r].stops.size(), 3u);
    EXPECT_EQ(tl.runs[r].seats, 4);
    for (int s = 0; s < 3; ++s)
      expect_stop(tl.runs[r].stops[s], want[s], "run " + std::to_string(r + 1) + " stop " + std::to_string(s + 1));
  }
  EXPECT_EQ(tl.stranded_passengers, kHandStranded);
  EXPECT_NEAR(tl.total_dwell_s, kHandTotalDwellS, 1e-9);

  const TimeBreakdown t = time_breakdown(inst, tl);
  EXPECT_NEAR(t.cruise, kHandCruise, 1e-9);
  EXPECT_NEAR(t.dwell, kHandDwell, 1e-9);
  EXPECT_NEAR(t.wait, kHandWait, 1e-9);
  EXPECT_NEAR(t.detention, kHandDetention, 1e-9);
  EXPECT_EQ(t.passengers, kHandPassengers);
  EXPECT_NEAR(t.avg, (kHandCruise + kHandDwell + kHandWait + kHandDetention) / kHandPassengers, 1e-12);
}

TEST(Timeline, SingleRunNoCongestion) {
  Instance inst = hand_instance();
  inst.runs.pop_back();
  inst.demand = {{1, 1, 3, 1, 0}};
  inst.fleet_size = 1;
  inst.finalize();
  Solution s;
  s.bus_of_run = {1};
  s.type_of_bus = {0};
  s.lambda_pct = {50};
  const RunTimeline tl = simulate_timeline(inst, s);
  const auto& st = tl.runs[0].stops;
  ASSERT_EQ(st.size(), 3u);
  EXPECT_DOUBLE_EQ(st[0].arrival, 480.0);
  EXPECT_DOUBLE_EQ(st[1].arrival, st[0].departure + 10.0);
  EXPECT_DOUBLE_EQ(st[2].arrival, st[1].departure + 12.0);
  // Nobody boards or alights at stop 2.
  EXPECT_DOUBLE_EQ(st[1].dwell_s, 0.0);
  for (const StopEvent& e : st) {
    EXPECT_EQ(e.detained, 0);
    EXPECT_EQ(e.detention_min, 0.0);
  }
  EXPECT_EQ(tl.stranded_passengers, 0);
}

TEST(Timeline, DetaineesJoinNextRun) {
  Instance inst = hand_instance();
  inst.vehicle_types[0].capacity_m3 = 10.0;  // 10 seats at 50%
  inst.demand = {{1, 1, 3, 15, 0}};
  inst.finalize();
  const RunTimeline tl = simulate_timeline(inst, hand_solution());
  const StopEvent& a = tl.runs[0].stops[0];
  EXPECT_EQ(a.waiting, 15);
  EXPECT_EQ(a.remaining_seats, 10);
  EXPECT_EQ(a.boarded, 10);
  EXPECT_EQ(a.detained, 5);
  const StopEvent& b = tl.runs[1].stops[0];
  EXPECT_EQ(b.new_arrivals, 0);
  EXPECT_EQ(b.waiting, 5);
  EXPECT_EQ(b.boarded, 5);
  EXPECT_EQ(b.detained, 0);
  // Five people wait from run 1's departure to run 2's arrival at the stop.
  EXPECT_NEAR(a.detention_min, 5 * (b.arrival - a.departure), 1e-9);
  EXPECT_EQ(tl.stranded_passengers, 0);
}

TEST(TimeBreakdown, HeadwayWindowWaiting) {
  // Run 2 leaves 10 minutes after run 1; its 20 riders arrive evenly in
  // between: integral of rho (h - t) over [0, h] = rho h^2 / 2 = 2 * 100 / 2.
  Instance inst = hand_instance();
  inst.vehicle_types[0].capacity_m3 = 40.0;
  inst.runs[1].departure_min = 490.0;
  inst.runs[1].arrival_min = 520.0;
  inst.demand = {{2, 1, 3, 20, 0}};
  inst.finalize();
  const RunTimeline tl = simulate_timeline(inst, hand_solution());
  const StopEvent& e = tl.runs[1].stops[0];
  EXPECT_DOUBLE_EQ(tl.runs[0].stops[0].departure, 480.0);
  EXPECT_DOUBLE_EQ(e.window_min, 10.0);
  EXPECT_NEAR(e.wait_pax_min, 100.0, 1e-9);
}

TEST(TimeBreakdown, ZeroDemand) {
  Instance inst = hand_instance();
  inst.demand.clear();
  inst.finalize();
  const TimeBreakdown t = time_breakdown(inst, simulate_timeline(inst, hand_solution()));
  EXPECT_EQ(t.cruise, 0.0);
  EXPECT_EQ(t.dwell, 0.0);
  EXPECT_EQ(t.wait, 0.0);
  EXPECT_EQ(t.detention, 0.0);
  EXPECT_EQ(t.avg, 0.0);
}

TEST(TimeBreakdown, LiteralModeKeepsIdentity) {
  const Instance inst = hand_instance();
  const RunTimeline tl = simulate_timeline(inst, hand_solution());
  const TimeBreakdown t = time_breakdown(inst, tl, WaitMode::literal);
  EXPECT_NEAR(t.total, t.cruise + t.dwell + t.wait + t.detention, 1e-12);
  EXPECT_NEAR(t.cruise, kHandCruise, 1e-9);
}

TEST(WaitMode, Names) {
  EXPECT_EQ(wait_mode_from_string(to_string(WaitMode::literal)), WaitMode::literal);
  EXPECT_EQ(wait_mode_from_string("waiting"), WaitMode::waiting);
  EXPECT_THROW(wait_mode_from_string("queue"), std::invalid_argument);
}
