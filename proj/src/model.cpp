#include "pfsm/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace pfsm {

const char* to_string(StopKind kind) {
  switch (kind) {
    case StopKind::regular: return "regular";
    case StopKind::dc: return "DC";
    case StopKind::itsc: return "ITSC";
  }
  return "regular";
}

StopKind stop_kind_from_string(const std::string& s) {
  if (s == "regular") return StopKind::regular;
  if (s == "DC" || s == "dc") return StopKind::dc;
  if (s == "ITSC" || s == "itsc") return StopKind::itsc;
  throw InstanceError("", "unknown stop kind '" + s + "'");
}

const char* to_string(FareMode mode) {
  return mode == FareMode::described ? "described" : "literal";
}

FareMode fare_mode_from_string(const std::string& s) {
  if (s == "described") return FareMode::described;
  if (s == "literal") return FareMode::literal;
  throw InstanceError("", "unknown fare mode '" + s + "'");
}

const char* to_string(Severity s) {
  switch (s) {
    case Severity::info: return "info";
    case Severity::warning: return "warning";
    case Severity::error: return "error";
  }
  return "info";
}

int Limits::lambda_min_pct() const {
  return static_cast<int>(std::ceil(lambda_min * 100.0 - 1e-9));
}

double parse_clock(const std::string& hhmm) {
  int h = 0, m = 0;
  char sep = 0;
  std::istringstream in(hhmm);
  if (!(in >> h >> sep >> m) || sep != ':' || h < 0 || h > 47 || m < 0 || m > 59)
    throw InstanceError("", "bad clock time '" + hhmm + "' (expected HH:MM)");
  return h * 60.0 + m;
}

std::string format_clock(double minutes) {
  const long total_s = std::lround(minutes * 60.0);
  const long h = total_s / 3600;
  const long m = (total_s % 3600) / 60;
  const long s = total_s % 60;
  char buf[32];
  if (s == 0)
    std::snprintf(buf, sizeof buf, "%02ld:%02ld", h, m);
  else
    std::snprintf(buf, sizeof buf, "%02ld:%02ld:%02ld", h, m, s);
  return buf;
}

namespace {

std::string pointer(const char* section, std::size_t idx) {
  return std::string("/") + section + "/" + std::to_string(idx);
}

}  // namespace

void Instance::finalize() {
  stop_index_.clear();
  line_index_.clear();
  run_index_.clear();

  if (!(limits.lambda_min > 0.0 && limits.lambda_min <= 1.0))
    throw InstanceError("/limits/lambda_min", "must satisfy 0 < lambda_min <= 1");
  if (limits.lambda_step_pct < 1 || limits.lambda_step_pct > 100)
    throw InstanceError("/limits/lambda_step_pct", "must be in [1, 100]");
  if (!(reliability_gamma > 0.5 && reliability_gamma < 1.0))
    throw InstanceError("/reliability/gamma", "must satisfy 0.5 < gamma < 1");
  if (toll.enabled) {
    for (int k = 0; k < 2; ++k)
      if (!(toll.seat_thresholds[k] < toll.seat_thresholds[k + 1]))
        throw InstanceError("/toll/seat_thresholds", "thresholds must be strictly increasing");
  }
  if (fleet_size < 1) throw InstanceError("/fleet/size", "fleet size must be >= 1");
  if (!(seat_volume_m3 > 0.0)) throw InstanceError("/capacity/seat_volume_m3", "must be > 0");
  if (!(parcel_volume_m3 > 0.0)) throw InstanceError("/capacity/parcel_volume_m3", "must be > 0");
  if (vehicle_types.empty()) throw InstanceError("/vehicle_types", "catalog is empty");
  if (runs.empty()) throw InstanceError("/runs", "no runs");

  for (std::size_t i = 0; i < vehicle_types.size(); ++i) {
    const auto& vt = vehicle_types[i];
    if (!(vt.capacity_m3 > 0 && vt.running_cost_per_km > 0 && vt.purchasing_cost_per_day > 0 &&
          vt.per_km_fare > 0))
      throw InstanceError(pointer("vehicle_types", i), "capacity, costs and fare must be > 0");
  }
  if (separated_bus_type && (*separated_bus_type < 0 || *separated_bus_type >= type_count()))
    throw InstanceError("/separated_bus_type", "not a vehicle type index");

  for (std::size_t i = 0; i < stops.size(); ++i) {
    if (!stop_index_.emplace(stops[i].id, static_cast<int>(i)).second)
      throw InstanceError(pointer("stops", i), "duplicate stop id " + std::to_string(stops[i].id));
  }

  line_positions_.assign(lines.size(), {});
  line_cumulative_km_.assign(lines.size(), {});
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const Line& l = lines[li];
    const std::string where = pointer("lines", li);
    if (!line_index_.emplace(l.id, static_cast<int>(li)).second)
      throw InstanceError(where, "duplicate line id " + std::to_string(l.id));
    if (l.stops.size() < 2) throw InstanceError(where, "a line needs at least two stops");
    if (l.segments.size() != l.stops.size() - 1)
      throw InstanceError(where, "expected one segment per consecutive stop pair");
    auto& positions = line_positions_[li];
    for (std::size_t k = 0; k < l.stops.size(); ++k) {
      if (!has_stop(l.stops[k]))
        throw InstanceError(where + "/stops/" + std::to_string(k),
                            "unknown stop id " + std::to_string(l.stops[k]));
      if (!positions.emplace(l.stops[k], static_cast<int>(k)).second)
        throw InstanceError(where, "stop " + std::to_string(l.stops[k]) + " appears twice");
    }
    auto& cum = line_cumulative_km_[li];
    cum.assign(l.stops.size(), 0.0);
    for (std::size_t k = 0; k < l.segments.size(); ++k) {
      const Segment& s = l.segments[k];
      if (!(s.distance_km > 0.0))
        throw InstanceError(where + "/segments/" + std::to_string(k), "distance must be > 0");
      if (!(s.capacity > 0.0))
        throw InstanceError(where + "/segments/" + std::to_string(k), "BPR capacity must be > 0");
      if (s.free_flow_min && !(*s.free_flow_min > 0.0))
        throw InstanceError(where + "/segments/" + std::to_string(k), "free-flow time must be > 0");
      cum[k + 1] = cum[k] + s.distance_km;
    }
    const bool has_passenger_stop =
        std::any_of(l.stops.begin(), l.stops.end(), [&](int id) { return stop(id).serves_passengers(); });
    if (!has_passenger_stop) throw InstanceError(where, "line has no passenger stop");
  }

  for (std::size_t ri = 0; ri < runs.size(); ++ri) {
    const Run& r = runs[ri];
    const std::string where = pointer("runs", ri);
    if (!run_index_.emplace(r.id, static_cast<int>(ri)).second)
      throw InstanceError(where, "duplicate run id " + std::to_string(r.id));
    if (!has_line(r.line)) throw InstanceError(where, "unknown line id " + std::to_string(r.line));
    if (r.direction != 1 && r.direction != -1)
      throw InstanceError(where, "direction must be +1 or -1");
    if (!(r.departure_min < r.arrival_min))
      throw InstanceError(where, "departure must precede arrival");
    if (!(r.volume_scale >= 0.0)) throw InstanceError(where, "volume_scale must be >= 0");
  }

  const int R = run_count();
  run_demand_.assign(R, {});
  run_has_parcels_.assign(R, 0);
  total_passengers_ = 0;
  total_parcels_ = 0;
  for (std::size_t di = 0; di < demand.size(); ++di) {
    const DemandRecord& d = demand[di];
    const std::string where = pointer("demand", di);
    if (!has_run(d.run)) throw InstanceError(where, "unknown run id " + std::to_string(d.run));
    if (!has_stop(d.from)) throw InstanceError(where, "unknown stop id " + std::to_string(d.from));
    if (!has_stop(d.to)) throw InstanceError(where, "unknown stop id " + std::to_string(d.to));
    if (d.from == d.to) throw InstanceError(where, "origin equals destination");
    if (d.passengers < 0 || d.parcels < 0) throw InstanceError(where, "counts must be >= 0");
    const int ri = run_index_.at(d.run);
    const Run& r = runs[ri];
    const int pi = position_on_line(r.line, d.from);
    const int pj = position_on_line(r.line, d.to);
    if (pi < 0 || pj < 0)
      throw InstanceError(where, "stop " + std::to_string(pi < 0 ? d.from : d.to) +
                                     " is not on line " + std::to_string(r.line));
    if (route_direction(pi, pj) != r.direction)
      throw InstanceError(where, "OD pair runs against the direction of run " + std::to_string(d.run));
    run_demand_[ri].push_back(static_cast<int>(di));
    if (d.parcels > 0) run_has_parcels_[ri] = 1;
    total_passengers_ += d.passengers;
    total_parcels_ += d.parcels;
  }

  std::map<std::pair<int, int>, std::vector<int>> by_chain;
  for (int ri = 0; ri < R; ++ri) by_chain[{runs[ri].line, runs[ri].direction}].push_back(ri);
  chains_.clear();
  prev_run_.assign(R, -1);
  next_run_.assign(R, -1);
  service_start_.assign(R, 0.0);
  for (auto& [key, chain] : by_chain) {
    std::sort(chain.begin(), chain.end(), [&](int a, int b) {
      if (runs[a].departure_min != runs[b].departure_min)
        return runs[a].departure_min < runs[b].departure_min;
      return runs[a].id < runs[b].id;
    });
    for (std::size_t k = 0; k < chain.size(); ++k) {
      if (k > 0) prev_run_[chain[k]] = chain[k - 1];
      if (k + 1 < chain.size()) next_run_[chain[k]] = chain[k + 1];
      service_start_[chain[k]] = runs[chain.front()].departure_min;
    }
    chains_.push_back(chain);
  }

  runs_by_departure_.resize(R);
  std::iota(runs_by_departure_.begin(), runs_by_departure_.end(), 0);
  std::sort(runs_by_departure_.begin(), runs_by_departure_.end(), [&](int a, int b) {
    if (runs[a].departure_min != runs[b].departure_min)
      return runs[a].departure_min < runs[b].departure_min;
    return runs[a].id < runs[b].id;
  });
}

const Stop& Instance::stop(int id) const {
  auto it = stop_index_.find(id);
  if (it == stop_index_.end()) throw InstanceError("", "unknown stop id " + std::to_string(id));
  return stops[it->second];
}

const Line& Instance::line(int id) const { return lines[line_index(id)]; }

int Instance::line_index(int line_id) const {
  auto it = line_index_.find(line_id);
  if (it == line_index_.end()) throw InstanceError("", "unknown line id " + std::to_string(line_id));
  return it->second;
}

int Instance::run_index(int run_id) const {
  auto it = run_index_.find(run_id);
  if (it == run_index_.end()) throw InstanceError("", "unknown run id " + std::to_string(run_id));
  return it->second;
}

int Instance::position_on_line(int line_id, int stop_id) const {
  const auto& pos = line_positions_[line_index(line_id)];
  auto it = pos.find(stop_id);
  return it == pos.end() ? -1 : it->second;
}

double Instance::path_km(int line_id, int from_stop, int to_stop) const {
  const int li = line_index(line_id);
  const int a = position_on_line(line_id, from_stop);
  const int b = position_on_line(line_id, to_stop);
  if (a < 0 || b < 0) throw InstanceError("", "stop not on line " + std::to_string(line_id));
  return std::abs(line_cumulative_km_[li][b] - line_cumulative_km_[li][a]);
}

double Instance::passenger_span_km(int line_id) const {
  const Line& l = line(line_id);
  const auto& cum = line_cumulative_km_[line_index(line_id)];
  int first = 0;
  int last = static_cast<int>(l.stops.size()) - 1;
  while (first < last && stop(l.stops[first]).kind == StopKind::dc) ++first;
  while (last > first && stop(l.stops[last]).kind == StopKind::dc) --last;
  return cum[last] - cum[first];
}

double Instance::full_span_km(int line_id) const {
  return line_cumulative_km_[line_index(line_id)].back();
}

int route_direction(int from_position, int to_position) {
  if (from_position == to_position) throw std::invalid_argument("route_direction: same stop");
  const int diff = to_position - from_position;
  return diff / std::abs(diff);
}

int route_direction(const Instance& inst, int line_id, int from_stop, int to_stop) {
  const int a = inst.position_on_line(line_id, from_stop);
  const int b = inst.position_on_line(line_id, to_stop);
  if (a < 0 || b < 0) throw std::invalid_argument("route_direction: stop not on line");
  return route_direction(a, b);
}

double run_distance(const Instance& inst, int run_idx, bool include_dc_detour) {
  const Run& r = inst.runs.at(run_idx);
  if (include_dc_detour && inst.run_carries_parcels(run_idx)) return inst.full_span_km(r.line);
  return inst.passenger_span_km(r.line);
}

int ValidationReport::count(Severity s) const {
  return static_cast<int>(std::count_if(findings.begin(), findings.end(),
                                        [s](const Finding& f) { return f.severity == s; }));
}

ValidationReport validate_instance(const Instance& inst) {
  ValidationReport rep;
  auto add = [&](Severity s, std::string code, std::string msg) {
    rep.findings.push_back({s, std::move(code), std::move(msg)});
  };

  for (const DemandRecord& d : inst.demand) {
    const std::string tag = "run " + std::to_string(d.run) + " " + std::to_string(d.from) + "->" +
                            std::to_string(d.to);
    if (d.parcels > 0 && (!inst.stop(d.from).allows_freight() || !inst.stop(d.to).allows_freight()))
      add(Severity::error, "freight-at-regular-stop", "freight at regular stop: " + tag);
    if (d.passengers > 0 &&
        (!inst.stop(d.from).serves_passengers() || !inst.stop(d.to).serves_passengers()))
      add(Severity::error, "passenger-at-dc", "passengers at a freight-only DC: " + tag);
  }

  for (const Line& l : inst.lines) {
    for (std::size_t k = 1; k + 1 < l.stops.size(); ++k)
      if (inst.stop(l.stops[k]).kind == StopKind::dc)
        add(Severity::warning, "interior-dc",
            "line " + std::to_string(l.id) + " has DC " + std::to_string(l.stops[k]) +
                " inside its sequence; only end DCs count as detour legs");
  }

  // Derived boarding/alighting aggregates (flow conservation by construction).
  for (int ri = 0; ri < inst.run_count(); ++ri) {
    const Run& r = inst.runs[ri];
    std::map<int, StopAggregate> agg;
    for (int di : inst.run_demand(ri)) {
      const DemandRecord& d = inst.demand[di];
      auto& o = agg[d.from];
      o.stop = d.from;
      o.boarding += d.passengers;
      o.parcels_on += d.parcels;
      auto& a = agg[d.to];
      a.stop = d.to;
      a.alighting += d.passengers;
      a.parcels_off += d.parcels;
    }
    RunAggregate ra{r.id, {}};
    long on = 0, off = 0;
    for (auto& [id, s] : agg) {
      on += s.boarding;
      off += s.alighting;
      ra.stops.push_back(s);
    }
    if (on != off)
      add(Severity::error, "flow-conservation", "run " + std::to_string(r.id) + " boardings != alightings");
    rep.aggregates.push_back(std::move(ra));
  }

  // Duty overlaps: a bus cannot serve two time-overlapping runs.
  const auto& order = inst.runs_by_departure();
  for (std::size_t a = 0; a < order.size(); ++a) {
    const Run& ra = inst.runs[order[a]];
    int concurrent = 1;
    for (std::size_t b = 0; b < order.size(); ++b) {
      if (a == b) continue;
      const Run& rb = inst.runs[order[b]];
      if (rb.departure_min <= ra.departure_min && ra.departure_min < rb.arrival_min) ++concurrent;
      if (b > a && rb.departure_min < ra.arrival_min && ra.departure_min < rb.arrival_min) {
        if (rb.departure_min == ra.departure_min)
          add(Severity::warning, "identical-departure",
              "runs " + std::to_string(ra.id) + " and " + std::to_string(rb.id) +
                  " depart together and cannot share a bus");
        else
          add(Severity::info, "overlapping-duty",
              "runs " + std::to_string(ra.id) + " and " + std::to_string(rb.id) + " overlap in time");
      }
    }
    rep.peak_concurrent_runs = std::max(rep.peak_concurrent_runs, concurrent);
  }
  if (rep.peak_concurrent_runs > inst.fleet_size)
    add(Severity::error, "fleet-too-small",
        "peak of " + std::to_string(rep.peak_concurrent_runs) + " concurrent runs exceeds fleet size " +
            std::to_string(inst.fleet_size));
  return rep;
}

}  // namespace pfsm
