#pragma once
// Shared test inputs: bundled data paths and the hand-worked 3-stop/2-run case.

#include <sstream>
#include <string>

#include "pfsm/model.hpp"
#include "pfsm/solution.hpp"

namespace pfsm::testing {

inline std::string data_path(const std::string& file) { return std::string(PFSM_DATA_DIR) + "/" + file; }

// Three plain stops, two overlapping runs (08:00 and 08:20), free-flow 10 and
// 12 minutes, no congestion. Both buses get 4 seats (4 m3 at 50%, 0.5 m3 a
// seat), so run 1 leaves people behind at stops 1 and 2.
inline const char* kHandJson = R"({
  "schema_version": 1,
  "name": "hand3",
  "stops": [{"id": 1, "kind": "regular"}, {"id": 2, "kind": "regular"}, {"id": 3, "kind": "regular"}],
  "lines": [{"id": 1, "stops": [1, 2, 3],
             "segments": [{"distance_km": 5, "free_flow_min": 10}, {"distance_km": 5, "free_flow_min": 12}]}],
  "runs": [{"id": 1, "line": 1, "direction": 1, "departure": "08:00", "arrival": "08:30"},
           {"id": 2, "line": 1, "direction": 1, "departure": "08:20", "arrival": "08:50"}],
  "vehicle_types": [{"name": "mini", "capacity_m3": 4, "running_cost_per_km": 1,
                     "purchasing_cost_per_day": 10, "per_km_fare": 0.1}],
  "fleet": {"size": 2},
  "demand": [{"run": 1, "from": 1, "to": 3, "passengers": 3},
             {"run": 1, "from": 1, "to": 2, "passengers": 2},
             {"run": 1, "from": 2, "to": 3, "passengers": 4},
             {"run": 2, "from": 1, "to": 3, "passengers": 1},
             {"run": 2, "from": 2, "to": 3, "passengers": 1}],
  "fares": {"passenger_base": 2, "passenger_base_km": 3, "freight_base": 1, "freight_per_km": 0.1,
            "freight_base_km": 3},
  "dwell": {"seconds_per_passenger": 3, "seconds_per_parcel": 5, "cost_per_hour": 30},
  "capacity": {"seat_volume_m3": 0.5, "parcel_volume_m3": 0.05},
  "bpr": {"beta": 0.15, "z": 4, "sigma_min": 0},
  "limits": {"t_max_min": 60, "lambda_min": 0.5, "lambda_step_pct": 50},
  "arrivals": {"model": "headway"}
})";

inline Instance hand_instance() {
  std::istringstream in(kHandJson);
  return load_instance(in);
}

inline Solution hand_solution() {
  Solution s;
  s.bus_of_run = {1, 2};
  s.type_of_bus = {0, 0};
  s.lambda_pct = {50, 50};
  return s;
}

// Worked by hand, minutes from midnight; one row per stop in travel order.
struct HandStop {
  double arrival, departure, dwell_s;
  long alighted, boarded, new_arrivals, detained;
  double wait_pax_min, detention_min;
};

inline constexpr HandStop kHandRun1[3] = {
    {480.0, 480.2, 12, 0, 4, 5, 1, 0.0, 19.8},
    {490.2, 490.25, 3, 1, 1, 4, 3, 20.4, 59.55},
    {502.25, 502.45, 12, 4, 0, 0, 0, 0.0, 0.0},
};
inline constexpr HandStop kHandRun2[3] = {
    {500.0, 500.1, 6, 0, 2, 1, 0, 9.9, 0.0},
    {510.1, 510.25, 9, 1, 3, 1, 1, 9.925, 0.0},
    {522.25, 522.45, 12, 4, 0, 0, 0, 0.0, 0.0},
};
inline constexpr double kHandCruise = 156.0;     // 88 + 68 passenger-minutes
inline constexpr double kHandDwell = 0.3;        // 3 pax x 3 s + 1 pax x 9 s
inline constexpr double kHandWait = 40.225;
inline constexpr double kHandDetention = 79.35;
inline constexpr double kHandTotalDwellS = 54.0;
inline constexpr long kHandStranded = 1;
inline constexpr long kHandPassengers = 11;

}  // namespace pfsm::testing
