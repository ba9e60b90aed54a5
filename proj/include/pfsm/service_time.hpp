#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pfsm/model.hpp"
#include "pfsm/solution.hpp"

namespace pfsm {

// Travel-time distribution of one segment (or a path of segments) for a run.
struct SegmentTimeStats {
  double mean = 0.0;       // minutes, BPR expectation
  double std = 0.0;        // minutes
  double skewness = 0.0;
  double kurtosis = 0.0;
  double free_flow = 0.0;  // minutes
  double volume = 0.0;
  double capacity = 1.0;
};

// Improved BPR: mean = a * (1 + beta * (Q / C)^z); throws if C <= 0.
SegmentTimeStats bpr_segment(double free_flow, double volume, double capacity, const BprParams& bpr,
                             double sigma);

// Stats between two stops of a run's line. For a multi-segment path the means
// and free-flow times add, variances add, and Q/C is taken from the most
// congested segment.
SegmentTimeStats segment_time(const Instance& inst, int run_idx, int from_stop, int to_stop);

double normal_cdf(double x);
double normal_quantile(double p);

// Cornish-Fisher corrected gamma-quantile of the travel time.
double cornish_fisher_quantile(double gamma, double skewness, double kurtosis);

// Time budget T^ = mean + std * corrected quantile. Requires 0.5 < gamma < 1.
double time_budget(const SegmentTimeStats& stats, double gamma);

// P(T <= budget) under the normal model.
double reliability(const SegmentTimeStats& stats, double budget);

// Stop dwell in seconds: the longest of alighting, boarding (capped by
// remaining seats) and parcel handling (only at freight stops).
double stop_dwell(const DwellParams& dwell, long alightings, long boardings, long remaining_seats, long parcels_on,
                  long parcels_off, bool freight_stop);

struct StopEvent {
  int stop = 0;
  double arrival = 0.0;     // minutes from midnight
  double departure = 0.0;
  double dwell_s = 0.0;
  long alighted = 0;
  long boarded = 0;
  long new_arrivals = 0;    // passengers who arrived in this run's window
  long waiting = 0;         // P^wait: new arrivals plus carried detainees
  long remaining_seats = 0; // P^re
  long detained = 0;        // P^det
  long onboard = 0;         // after departure
  long parcels_loaded = 0;
  long parcels_unloaded = 0;
  double onboard_volume = 0.0;  // parcel m3 after departure
  double window_min = 0.0;      // arrival window used for waiting time
  double wait_pax_min = 0.0;
  double detention_min = 0.0;   // detainees x time until the next run arrives
};

struct RunTrace {
  int run_idx = 0;
  int bus = 0;
  int seats = 0;
  double freight_capacity_m3 = 0.0;
  long peak_onboard = 0;
  double peak_volume_m3 = 0.0;
  double cruise_pax_min = 0.0;
  double dwell_pax_min = 0.0;
  std::vector<StopEvent> stops;  // in travel order
};

struct RunTimeline {
  std::vector<RunTrace> runs;  // indexed by run index
  long stranded_passengers = 0;
  double total_dwell_s = 0.0;
};

// Per-run travel sequences and demand grouped by stop, built once per instance.
class TimelinePlan {
 public:
  explicit TimelinePlan(const Instance& inst);

  // Passengers sharing an origin and destination; dest is a line position.
  struct Group {
    int dest = 0;
    long count = 0;
  };

  struct RunPlan {
    std::vector<int> stops;               // stop ids in travel order
    std::vector<int> line_pos;            // line position of each travel stop
    std::vector<int> travel_of_pos;       // inverse, -1 when skipped
    std::vector<char> freight_stop;
    std::vector<char> passenger_stop;
    std::vector<double> segment_mean;     // travel order, size n-1
    std::vector<double> segment_std;
    std::vector<double> cum_mean;         // size n
    int origin = 0;                       // first passenger terminal
    std::vector<std::vector<Group>> boarding;  // new demand per travel stop
    std::vector<long> parcels_on;
    std::vector<long> parcels_off;
    long passengers = 0;
  };

  const RunPlan& run(int run_idx) const { return runs_[run_idx]; }

 private:
  std::vector<RunPlan> runs_;
};

RunTimeline simulate_timeline(const Instance& inst, const Solution& sol);
RunTimeline simulate_timeline(const Instance& inst, const TimelinePlan& plan, const Solution& sol);

enum class WaitMode : std::uint8_t { waiting, literal };
const char* to_string(WaitMode m);
WaitMode wait_mode_from_string(const std::string& s);

struct TimeBreakdown {
  double cruise = 0.0;     // passenger-minutes
  double dwell = 0.0;
  double wait = 0.0;
  double detention = 0.0;
  double total = 0.0;
  double avg = 0.0;        // minutes per passenger
  long passengers = 0;

  friend bool operator==(const TimeBreakdown&, const TimeBreakdown&) = default;
};

TimeBreakdown time_breakdown(const Instance& inst, const RunTimeline& timeline, WaitMode mode = WaitMode::waiting);

}  // namespace pfsm
