#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace pfsm {

// Raised by the instance loader and by Instance::finalize. `where` is either a
// "line:col" location in the source document or a JSON pointer to the field.
class InstanceError : public std::runtime_error {
 public:
  InstanceError(std::string where, const std::string& what)
      : std::runtime_error(where.empty() ? what : where + ": " + what), where_(std::move(where)), detail_(what) {}
  const std::string& where() const noexcept { return where_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string where_;
  std::string detail_;
};

enum class StopKind : std::uint8_t { regular, dc, itsc };

const char* to_string(StopKind kind);
StopKind stop_kind_from_string(const std::string& s);

struct Stop {
  int id = 0;
  StopKind kind = StopKind::regular;
  std::string name;

  bool allows_freight() const { return kind != StopKind::regular; }
  bool serves_passengers() const { return kind != StopKind::dc; }
};

// Undirected data of the link between two consecutive stops of a line.
struct Segment {
  double distance_km = 0.0;
  std::optional<double> free_flow_min;  // derived from the timetable when absent
  double volume = 0.0;                  // BPR demand volume Q
  double capacity = 1.0;                // BPR capacity C
  std::optional<double> sigma_min;      // falls back to BprParams::sigma_min
};

// Stops are listed in forward (+1) order. DC stops, when present, sit at the
// ends of the sequence; the legs that reach them are the DC detour.
struct Line {
  int id = 0;
  std::string name;
  std::vector<int> stops;
  std::vector<Segment> segments;  // segments[k] joins stops[k] and stops[k+1]
  double toll_km = 0.0;
};

struct Run {
  int id = 0;
  int line = 0;
  int direction = +1;
  double departure_min = 0.0;  // minutes from midnight, at the origin terminal
  double arrival_min = 0.0;    // minutes from midnight, at the destination terminal
  std::optional<double> energy_kwh;
  double volume_scale = 1.0;   // multiplies segment BPR volumes for this run
};

struct VehicleType {
  std::string name;
  double capacity_m3 = 0.0;
  double running_cost_per_km = 0.0;
  double purchasing_cost_per_day = 0.0;
  double per_km_fare = 0.0;
  double energy_kwh_per_km = 0.0;
};

struct DemandRecord {
  int run = 0;
  int from = 0;
  int to = 0;
  long passengers = 0;
  long parcels = 0;
};

enum class FareMode : std::uint8_t { described, literal };

const char* to_string(FareMode mode);
FareMode fare_mode_from_string(const std::string& s);

struct Fares {
  double passenger_base = 0.0;     // gamma_u
  double passenger_base_km = 0.0;  // L_u
  double freight_base = 0.0;       // gamma_f
  double freight_per_km = 0.0;     // eta_f
  double freight_base_km = 0.0;    // L_f
  FareMode mode = FareMode::described;
};

// Seat-class road toll. Disabled means toll-free (C_toll = 0).
struct TollTable {
  bool enabled = false;
  std::array<double, 4> rates{};         // money per toll-km, classes 1..4
  std::array<int, 3> seat_thresholds{};  // strictly increasing
};

// Calibration knobs; the defaults are not taken from any observed case.
struct DwellParams {
  double seconds_per_passenger = 3.0;
  double seconds_per_parcel = 5.0;
  double cost_per_hour = 30.0;
};

struct BprParams {
  double beta = 0.15;
  double power = 4.0;
  double sigma_min = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;
};

struct Limits {
  double t_max_min = 50.0;
  double lambda_min = 0.4;
  int lambda_step_pct = 1;

  int lambda_min_pct() const;
};

enum class ArrivalModel : std::uint8_t { headway, lead };

// Passenger arrival rate per stop: constant over each inter-run window
// (headway) or over the last `lead_min` minutes before the bus (lead).
struct Arrivals {
  ArrivalModel model = ArrivalModel::headway;
  double lead_min = 10.0;
};

struct CarbonFactors {
  double diesel_kg_per_l = 2.6765;
  double diesel_l_per_km = 0.15;
  double grid_kg_per_kwh = 0.7967;

  friend bool operator==(const CarbonFactors&, const CarbonFactors&) = default;
};

struct TruckParams {
  double capacity_m3 = 17.28;
  double fuel_cost_per_km = 1.6;
  double purchasing_cost_per_day = 850.0;
  double wage_per_day = 500.0;
};

// Immutable problem description. Build the public fields, then call finalize()
// once; the loader does this for you. All queries below require finalize().
class Instance {
 public:
  int schema_version = 1;
  std::string name;
  std::string currency = "RMB";
  std::vector<Stop> stops;
  std::vector<Line> lines;
  std::vector<Run> runs;
  std::vector<VehicleType> vehicle_types;
  int fleet_size = 0;
  std::vector<DemandRecord> demand;
  Fares fares;
  TollTable toll;
  DwellParams dwell;
  double seat_volume_m3 = 0.5;
  double parcel_volume_m3 = 0.05;
  BprParams bpr;
  double reliability_gamma = 0.85;
  Limits limits;
  Arrivals arrivals;
  CarbonFactors carbon;
  std::optional<TruckParams> trucks;
  std::optional<int> separated_bus_type;

  // Checks invariants and builds the lookup tables. Throws InstanceError.
  void finalize();

  int run_count() const { return static_cast<int>(runs.size()); }
  int type_count() const { return static_cast<int>(vehicle_types.size()); }

  const Stop& stop(int id) const;
  const Line& line(int id) const;
  int run_index(int run_id) const;
  int line_index(int line_id) const;
  bool has_stop(int id) const { return stop_index_.count(id) != 0; }
  bool has_run(int id) const { return run_index_.count(id) != 0; }
  bool has_line(int id) const { return line_index_.count(id) != 0; }

  // Position of a stop in a line's forward sequence, or -1.
  int position_on_line(int line_id, int stop_id) const;

  // Path distance between two stops of the same line.
  double path_km(int line_id, int from_stop, int to_stop) const;

  // Terminal-to-terminal distance of a line, excluding DC legs.
  double passenger_span_km(int line_id) const;
  // Full distance including DC legs at both ends.
  double full_span_km(int line_id) const;

  // Whether any parcel demand is attached to the run (by run index).
  bool run_carries_parcels(int run_idx) const { return run_has_parcels_[run_idx]; }
  // Demand records of a run (by run index), as indices into `demand`.
  const std::vector<int>& run_demand(int run_idx) const { return run_demand_[run_idx]; }

  long total_passengers() const { return total_passengers_; }
  long total_parcels() const { return total_parcels_; }

  // Previous/next run (by index) of the same line and direction, or -1.
  int previous_run(int run_idx) const { return prev_run_[run_idx]; }
  int next_run(int run_idx) const { return next_run_[run_idx]; }
  // Earliest scheduled departure among runs of the same line and direction.
  double service_start(int run_idx) const { return service_start_[run_idx]; }

  // Chains of run indices sharing (line, direction), each ordered by departure.
  const std::vector<std::vector<int>>& run_chains() const { return chains_; }

  // Run indices ordered by (departure, id).
  const std::vector<int>& runs_by_departure() const { return runs_by_departure_; }

 private:
  std::unordered_map<int, int> stop_index_;
  std::unordered_map<int, int> line_index_;
  std::unordered_map<int, int> run_index_;
  std::vector<std::unordered_map<int, int>> line_positions_;
  std::vector<std::vector<double>> line_cumulative_km_;
  std::vector<std::vector<int>> run_demand_;
  std::vector<char> run_has_parcels_;
  std::vector<int> prev_run_;
  std::vector<int> next_run_;
  std::vector<double> service_start_;
  std::vector<std::vector<int>> chains_;
  std::vector<int> runs_by_departure_;
  long total_passengers_ = 0;
  long total_parcels_ = 0;
};

// "HH:MM" <-> minutes from midnight.
double parse_clock(const std::string& hhmm);
std::string format_clock(double minutes);

Instance load_instance(std::istream& in);
Instance load_instance_file(const std::string& path);

// Sign of the travel direction from stop i to stop j on one line.
int route_direction(const Instance& inst, int line_id, int from_stop, int to_stop);
int route_direction(int from_position, int to_position);

// Running distance of a run. DC legs are added only when requested and the
// run carries parcels.
double run_distance(const Instance& inst, int run_idx, bool include_dc_detour);

enum class Severity : std::uint8_t { info, warning, error };
const char* to_string(Severity s);

struct Finding {
  Severity severity = Severity::info;
  std::string code;
  std::string message;
};

// Per-run per-stop boarding/alighting aggregates derived from the OD records.
struct StopAggregate {
  int stop = 0;
  long boarding = 0;
  long alighting = 0;
  long parcels_on = 0;
  long parcels_off = 0;
};

struct RunAggregate {
  int run = 0;
  std::vector<StopAggregate> stops;
};

struct ValidationReport {
  std::vector<Finding> findings;
  std::vector<RunAggregate> aggregates;
  int peak_concurrent_runs = 0;

  int count(Severity s) const;
  bool ok() const { return count(Severity::error) == 0; }
};

ValidationReport validate_instance(const Instance& inst);

}  // namespace pfsm
