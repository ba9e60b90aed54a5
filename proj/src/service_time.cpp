#include "pfsm/service_time.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

#include "pfsm/economics.hpp"

namespace pfsm {

SegmentTimeStats bpr_segment(double free_flow, double volume, double capacity, const BprParams& bpr, double sigma) {
  if (!(capacity > 0.0)) throw std::invalid_argument("bpr_segment: capacity must be > 0");
  SegmentTimeStats s;
  s.free_flow = free_flow;
  s.volume = volume;
  s.capacity = capacity;
  s.mean = free_flow * (1.0 + bpr.beta * std::pow(volume / capacity, bpr.power));
  s.std = sigma;
  s.skewness = bpr.skewness;
  s.kurtosis = bpr.kurtosis;
  return s;
}

namespace {

// BPR stats of one line segment (by its index on the line) as driven by a run.
SegmentTimeStats line_segment_stats(const Instance& inst, const Run& run, const Line& line, int seg) {
  const Segment& s = line.segments[seg];
  double a = 0.0;
  if (s.free_flow_min) {
    a = *s.free_flow_min;
  } else {
    // Spread the scheduled terminal-to-terminal time proportionally to distance.
    const double span = inst.passenger_span_km(line.id);
    a = (run.arrival_min - run.departure_min) * s.distance_km / span;
  }
  return bpr_segment(a, s.volume * run.volume_scale, s.capacity, inst.bpr, s.sigma_min.value_or(inst.bpr.sigma_min));
}

}  // namespace

SegmentTimeStats segment_time(const Instance& inst, int run_idx, int from_stop, int to_stop) {
  const Run& run = inst.runs.at(run_idx);
  const Line& line = inst.line(run.line);
  const int a = inst.position_on_line(run.line, from_stop);
  const int b = inst.position_on_line(run.line, to_stop);
  if (a < 0 || b < 0 || a == b) throw std::invalid_argument("segment_time: stops not a path on the run's line");
  SegmentTimeStats out;
  double var = 0.0;
  double worst_ratio = -1.0;
  for (int k = std::min(a, b); k < std::max(a, b); ++k) {
    const SegmentTimeStats s = line_segment_stats(inst, run, line, k);
    out.mean += s.mean;
    out.free_flow += s.free_flow;
    var += s.std * s.std;
    if (s.volume / s.capacity > worst_ratio) {
      worst_ratio = s.volume / s.capacity;
      out.volume = s.volume;
      out.capacity = s.capacity;
    }
  }
  out.std = std::sqrt(var);
  out.skewness = inst.bpr.skewness;
  out.kurtosis = inst.bpr.kurtosis;
  return out;
}

double normal_cdf(double x) {
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  return boost::math::cdf(boost::math::normal_distribution<double>(), x);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p must be in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double cornish_fisher_quantile(double gamma, double skewness, double kurtosis) {
  const double z = normal_quantile(gamma);
  const double z2 = z * z, z3 = z2 * z;
  return z + skewness / 6.0 * (z2 - 1.0) + kurtosis / 24.0 * (z3 - 3.0 * z) -
         skewness * skewness / 36.0 * (2.0 * z3 - 5.0 * z);
}

double time_budget(const SegmentTimeStats& stats, double gamma) {
  if (!(gamma > 0.5 && gamma < 1.0)) throw std::invalid_argument("time_budget: gamma must be in (0.5, 1)");
  return stats.mean + stats.std * cornish_fisher_quantile(gamma, stats.skewness, stats.kurtosis);
}

double reliability(const SegmentTimeStats& stats, double budget) {
  if (stats.std <= 0.0) return budget >= stats.mean ? 1.0 : 0.0;
  return normal_cdf((budget - stats.mean) / stats.std);
}

double stop_dwell(const DwellParams& dwell, long alightings, long boardings, long remaining_seats, long parcels_on,
                  long parcels_off, bool freight_stop) {
  const double off = dwell.seconds_per_passenger * static_cast<double>(alightings);
  const double on = dwell.seconds_per_passenger * static_cast<double>(std::min(boardings, remaining_seats));
  const double cargo =
      freight_stop ? dwell.seconds_per_parcel * static_cast<double>(parcels_on + parcels_off) : 0.0;
  return std::max({off, on, cargo, 0.0});
}

TimelinePlan::TimelinePlan(const Instance& inst) {
  const int R = inst.run_count();
  runs_.resize(R);
  for (int ri = 0; ri < R; ++ri) {
    const Run& run = inst.runs[ri];
    const Line& line = inst.line(run.line);
    RunPlan& p = runs_[ri];
    const int n_line = static_cast<int>(line.stops.size());

    // Travel order; DC end legs only when the run carries parcels.
    std::vector<int> pos(n_line);
    for (int k = 0; k < n_line; ++k) pos[k] = run.direction > 0 ? k : n_line - 1 - k;
    int first = 0, last = n_line - 1;
    if (!inst.run_carries_parcels(ri)) {
      while (first < last && inst.stop(line.stops[pos[first]]).kind == StopKind::dc) ++first;
      while (last > first && inst.stop(line.stops[pos[last]]).kind == StopKind::dc) --last;
    }
    p.travel_of_pos.assign(n_line, -1);
    for (int k = first; k <= last; ++k) {
      const int lp = pos[k];
      const Stop& st = inst.stop(line.stops[lp]);
      p.travel_of_pos[lp] = static_cast<int>(p.stops.size());
      p.stops.push_back(st.id);
      p.line_pos.push_back(lp);
      p.freight_stop.push_back(st.allows_freight() ? 1 : 0);
      p.passenger_stop.push_back(st.serves_passengers() ? 1 : 0);
    }
    const int n = static_cast<int>(p.stops.size());
    p.cum_mean.assign(n, 0.0);
    for (int k = 0; k + 1 < n; ++k) {
      const int seg = std::min(p.line_pos[k], p.line_pos[k + 1]);
      const SegmentTimeStats s = line_segment_stats(inst, run, line, seg);
      p.segment_mean.push_back(s.mean);
      p.segment_std.push_back(s.std);
      p.cum_mean[k + 1] = p.cum_mean[k] + s.mean;
    }
    p.origin = 0;
    while (p.origin < n - 1 && !p.passenger_stop[p.origin]) ++p.origin;

    p.boarding.assign(n, {});
    p.parcels_on.assign(n, 0);
    p.parcels_off.assign(n, 0);
    for (int di : inst.run_demand(ri)) {
      const DemandRecord& d = inst.demand[di];
      const int a = p.travel_of_pos[inst.position_on_line(run.line, d.from)];
      const int b = p.travel_of_pos[inst.position_on_line(run.line, d.to)];
      if (d.passengers > 0) {
        p.boarding[a].push_back({inst.position_on_line(run.line, d.to), d.passengers});
        p.passengers += d.passengers;
      }
      p.parcels_on[a] += d.parcels;
      p.parcels_off[b] += d.parcels;
    }
  }
}

RunTimeline simulate_timeline(const Instance& inst, const Solution& sol) {
  return simulate_timeline(inst, TimelinePlan(inst), sol);
}

namespace {

struct Carried {
  int dest = 0;  // line position
  long count = 0;
};

// Waiting pool of one stop between consecutive runs of a chain.
struct StopState {
  bool visited = false;
  double last_departure = 0.0;
  std::deque<Carried> detained;
  long detained_total = 0;
  int event_of_last = -1;  // travel index in the previous run that left them
  int last_run = -1;
};

}  // namespace

RunTimeline simulate_timeline(const Instance& inst, const TimelinePlan& plan, const Solution& sol) {
  RunTimeline tl;
  tl.runs.resize(inst.run_count());
  const std::vector<int> seats_of_bus = bus_seats(inst, sol);
  const double parcel_vol = inst.parcel_volume_m3;
  const DwellParams& dw = inst.dwell;

  for (const auto& chain : inst.run_chains()) {
    const Line& line = inst.line(inst.runs[chain.front()].line);
    std::vector<StopState> state(line.stops.size());

    for (int ri : chain) {
      const Run& run = inst.runs[ri];
      const auto& p = plan.run(ri);
      const int n = static_cast<int>(p.stops.size());
      const int bus = sol.bus_of_run[ri];
      const int type = sol.type_of_bus[bus - 1];
      const VehicleType& vt = inst.vehicle_types[type];

      RunTrace& tr = tl.runs[ri];
      tr.run_idx = ri;
      tr.bus = bus;
      tr.seats = seats_of_bus[bus - 1];
      tr.freight_capacity_m3 = (100 - sol.lambda_pct[bus - 1]) / 100.0 * vt.capacity_m3;
      tr.stops.assign(n, {});

      // Arrival at the first passenger terminal is the scheduled departure;
      // DC legs before it are back-timed.
      double lead = 0.0;
      for (int k = 0; k < p.origin; ++k) {
        lead += stop_dwell(dw, 0, 0, 0, p.parcels_on[k], p.parcels_off[k], p.freight_stop[k]) / 60.0;
        lead += p.segment_mean[k];
      }

      std::vector<long> alight_at(n, 0);
      struct Ride {
        int from, to;  // travel indices
        long count;
      };
      std::vector<Ride> rides;
      long onboard = 0;
      double volume = 0.0;
      double clock = run.departure_min - lead;

      for (int k = 0; k < n; ++k) {
        StopEvent& ev = tr.stops[k];
        ev.stop = p.stops[k];
        if (k > 0) clock = tr.stops[k - 1].departure + p.segment_mean[k - 1];
        ev.arrival = clock;

        ev.alighted = alight_at[k];
        onboard -= ev.alighted;
        ev.parcels_unloaded = p.parcels_off[k];
        ev.parcels_loaded = p.parcels_on[k];
        volume += (ev.parcels_loaded - ev.parcels_unloaded) * parcel_vol;

        long boarded = 0;
        if (p.passenger_stop[k]) {
          StopState& st = state[p.line_pos[k]];
          ev.remaining_seats = std::max(0L, static_cast<long>(tr.seats) - onboard);
          long new_arrivals = 0;
          for (const auto& g : p.boarding[k]) new_arrivals += g.count;
          ev.new_arrivals = new_arrivals;
          ev.waiting = new_arrivals + st.detained_total;

          // Arrival window for the new passengers.
          if (inst.arrivals.model == ArrivalModel::headway) {
            const double open = st.visited ? st.last_departure : inst.service_start(ri);
            ev.window_min = std::max(0.0, ev.arrival - open);
          } else {
            ev.window_min = inst.arrivals.lead_min;
            if (st.visited) ev.window_min = std::min(ev.window_min, std::max(0.0, ev.arrival - st.last_departure));
          }
          ev.wait_pax_min = static_cast<double>(new_arrivals) * ev.window_min / 2.0;

          // Previous run's detainees waited until this arrival.
          if (st.detained_total > 0 && st.last_run >= 0) {
            StopEvent& prev = tl.runs[st.last_run].stops[st.event_of_last];
            prev.detention_min = static_cast<double>(st.detained_total) * (ev.arrival - prev.departure);
          }

          // FIFO: carried detainees first, then this run's requests.
          std::deque<Carried> queue = std::move(st.detained);
          for (const auto& g : p.boarding[k]) queue.push_back({g.dest, g.count});
          long room = ev.remaining_seats;
          std::deque<Carried> left;
          for (auto& c : queue) {
            const long take = std::min(room, c.count);
            if (take > 0) {
              const int dest = p.travel_of_pos[c.dest];
              alight_at[dest] += take;
              rides.push_back({k, dest, take});
              room -= take;
              boarded += take;
            }
            if (c.count > take) left.push_back({c.dest, c.count - take});
          }
          ev.boarded = boarded;
          ev.detained = ev.waiting - boarded;
          st.detained = std::move(left);
          st.detained_total = ev.detained;
          st.event_of_last = k;
          st.last_run = ri;
        }
        onboard += boarded;
        ev.onboard = onboard;
        ev.onboard_volume = volume;
        ev.dwell_s = stop_dwell(dw, ev.alighted, ev.waiting, ev.remaining_seats, ev.parcels_loaded,
                                ev.parcels_unloaded, p.freight_stop[k]);
        ev.departure = ev.arrival + ev.dwell_s / 60.0;
        tl.total_dwell_s += ev.dwell_s;
        tr.peak_onboard = std::max(tr.peak_onboard, onboard);
        tr.peak_volume_m3 = std::max(tr.peak_volume_m3, volume);

        if (p.passenger_stop[k]) {
          StopState& st = state[p.line_pos[k]];
          st.visited = true;
          st.last_departure = ev.departure;
        }
      }

      // In-vehicle and intermediate-dwell time of everyone who rode.
      std::vector<double> cum_dwell(n, 0.0);
      for (int k = 0; k < n; ++k) cum_dwell[k] = (k ? cum_dwell[k - 1] : 0.0) + tr.stops[k].dwell_s;
      for (const Ride& rd : rides) {
        const int a = rd.from, b = rd.to;
        const double cnt = static_cast<double>(rd.count);
        tr.cruise_pax_min += cnt * (p.cum_mean[b] - p.cum_mean[a]);
        if (b - 1 > a) tr.dwell_pax_min += cnt * (cum_dwell[b - 1] - cum_dwell[a]) / 60.0;
      }
    }

    for (const StopState& st : state) tl.stranded_passengers += st.detained_total;
  }
  return tl;
}

const char* to_string(WaitMode m) { return m == WaitMode::waiting ? "waiting" : "literal"; }

WaitMode wait_mode_from_string(const std::string& s) {
  if (s == "waiting") return WaitMode::waiting;
  if (s == "literal") return WaitMode::literal;
  throw std::invalid_argument("unknown wait mode '" + s + "'");
}

TimeBreakdown time_breakdown(const Instance& inst, const RunTimeline& timeline, WaitMode mode) {
  TimeBreakdown b;
  for (const RunTrace& tr : timeline.runs) {
    b.cruise += tr.cruise_pax_min;
    b.dwell += tr.dwell_pax_min;
    for (const StopEvent& ev : tr.stops) {
      b.wait += mode == WaitMode::waiting ? ev.wait_pax_min : static_cast<double>(ev.new_arrivals);
      b.detention += ev.detention_min;
    }
  }
  b.total = b.cruise + b.dwell + b.wait + b.detention;
  b.passengers = inst.total_passengers();
  b.avg = b.passengers > 0 ? b.total / static_cast<double>(b.passengers) : 0.0;
  return b;
}

}  // namespace pfsm
