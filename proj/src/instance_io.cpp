#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"
#include "pfsm/model.hpp"

namespace pfsm {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

// Field accessors that report the JSON pointer of the offending value.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return j_; }
  bool has(const char* key) const { return j_.is_object() && j_.contains(key); }

  Node at(const char* key) const {
    if (!j_.is_object() || !j_.contains(key)) throw InstanceError(path_, std::string("missing field '") + key + "'");
    return Node(j_.at(key), path_ + "/" + key);
  }
  Node at(std::size_t i) const { return Node(j_.at(i), path_ + "/" + std::to_string(i)); }

  std::size_t size() const {
    if (!j_.is_array()) throw InstanceError(path_, "expected an array");
    return j_.size();
  }

  double number() const {
    if (!j_.is_number()) throw InstanceError(path_, "expected a number");
    return j_.get<double>();
  }
  long integer() const {
    if (!j_.is_number_integer()) throw InstanceError(path_, "expected an integer");
    return j_.get<long>();
  }
  bool boolean() const {
    if (!j_.is_boolean()) throw InstanceError(path_, "expected true/false");
    return j_.get<bool>();
  }
  std::string string() const {
    if (!j_.is_string()) throw InstanceError(path_, "expected a string");
    return j_.get<std::string>();
  }
  double clock() const {
    try {
      return parse_clock(string());
    } catch (const InstanceError& e) {
      throw InstanceError(path_, e.detail());
    }
  }

  double number_or(const char* key, double fallback) const { return has(key) ? at(key).number() : fallback; }
  std::optional<double> optional_number(const char* key) const {
    if (!has(key) || j_.at(key).is_null()) return std::nullopt;
    return at(key).number();
  }

 private:
  const json& j_;
  std::string path_;
};

Segment read_segment(const Node& n, double distance) {
  Segment s;
  s.distance_km = distance;
  s.free_flow_min = n.optional_number("free_flow_min");
  s.volume = n.number_or("volume", 0.0);
  s.capacity = n.number_or("capacity", 1.0);
  s.sigma_min = n.optional_number("sigma_min");
  return s;
}

Instance read_instance(const Node& root) {
  Instance inst;
  inst.schema_version = static_cast<int>(root.at("schema_version").integer());
  if (inst.schema_version != kSchemaVersion)
    throw InstanceError("/schema_version", "unsupported schema version " + std::to_string(inst.schema_version));
  if (root.has("name")) inst.name = root.at("name").string();
  if (root.has("currency")) inst.currency = root.at("currency").string();

  const Node stops = root.at("stops");
  for (std::size_t i = 0; i < stops.size(); ++i) {
    const Node s = stops.at(i);
    Stop st;
    st.id = static_cast<int>(s.at("id").integer());
    try {
      st.kind = stop_kind_from_string(s.at("kind").string());
    } catch (const InstanceError& e) {
      throw InstanceError(s.path() + "/kind", e.detail());
    }
    if (s.has("name")) st.name = s.at("name").string();
    inst.stops.push_back(st);
  }

  const Node lines = root.at("lines");
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const Node l = lines.at(i);
    Line line;
    line.id = static_cast<int>(l.at("id").integer());
    if (l.has("name")) line.name = l.at("name").string();
    const Node seq = l.at("stops");
    for (std::size_t k = 0; k < seq.size(); ++k) line.stops.push_back(static_cast<int>(seq.at(k).integer()));
    const Node segs = l.at("segments");
    for (std::size_t k = 0; k < segs.size(); ++k) {
      const Node sg = segs.at(k);
      if (sg.raw().is_number())
        line.segments.push_back(read_segment(sg, sg.number()));
      else
        line.segments.push_back(read_segment(sg, sg.at("distance_km").number()));
    }
    line.toll_km = l.number_or("toll_km", 0.0);
    inst.lines.push_back(std::move(line));
  }

  const Node runs = root.at("runs");
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const Node r = runs.at(i);
    Run run;
    run.id = static_cast<int>(r.at("id").integer());
    run.line = static_cast<int>(r.at("line").integer());
    run.direction = static_cast<int>(r.at("direction").integer());
    run.departure_min = r.at("departure").clock();
    run.arrival_min = r.at("arrival").clock();
    run.energy_kwh = r.optional_number("energy_kwh");
    run.volume_scale = r.number_or("volume_scale", 1.0);
    inst.runs.push_back(run);
  }

  const Node types = root.at("vehicle_types");
  for (std::size_t i = 0; i < types.size(); ++i) {
    const Node t = types.at(i);
    VehicleType vt;
    vt.name = t.at("name").string();
    vt.capacity_m3 = t.at("capacity_m3").number();
    vt.running_cost_per_km = t.at("running_cost_per_km").number();
    vt.purchasing_cost_per_day = t.at("purchasing_cost_per_day").number();
    vt.per_km_fare = t.at("per_km_fare").number();
    vt.energy_kwh_per_km = t.number_or("energy_kwh_per_km", 0.0);
    inst.vehicle_types.push_back(vt);
  }

  const Node fleet = root.at("fleet");
  inst.fleet_size = static_cast<int>(fleet.at("size").integer());
  if (fleet.has("separated_bus_type")) inst.separated_bus_type = static_cast<int>(fleet.at("separated_bus_type").integer());

  const Node demand = root.at("demand");
  for (std::size_t i = 0; i < demand.size(); ++i) {
    const Node d = demand.at(i);
    DemandRecord rec;
    rec.run = static_cast<int>(d.at("run").integer());
    rec.from = static_cast<int>(d.at("from").integer());
    rec.to = static_cast<int>(d.at("to").integer());
    rec.passengers = d.has("passengers") ? d.at("passengers").integer() : 0;
    rec.parcels = d.has("parcels") ? d.at("parcels").integer() : 0;
    inst.demand.push_back(rec);
  }

  const Node fares = root.at("fares");
  inst.fares.passenger_base = fares.at("passenger_base").number();
  inst.fares.passenger_base_km = fares.at("passenger_base_km").number();
  inst.fares.freight_base = fares.at("freight_base").number();
  inst.fares.freight_per_km = fares.at("freight_per_km").number();
  inst.fares.freight_base_km = fares.at("freight_base_km").number();
  if (fares.has("mode")) {
    try {
      inst.fares.mode = fare_mode_from_string(fares.at("mode").string());
    } catch (const InstanceError& e) {
      throw InstanceError("/fares/mode", e.detail());
    }
  }

  if (root.has("toll")) {
    const Node toll = root.at("toll");
    inst.toll.enabled = toll.has("enabled") ? toll.at("enabled").boolean() : false;
    if (inst.toll.enabled) {
      const Node rates = toll.at("rates");
      const Node thr = toll.at("seat_thresholds");
      if (rates.size() != 4) throw InstanceError(rates.path(), "expected 4 class rates");
      if (thr.size() != 3) throw InstanceError(thr.path(), "expected 3 seat thresholds");
      for (std::size_t k = 0; k < 4; ++k) inst.toll.rates[k] = rates.at(k).number();
      for (std::size_t k = 0; k < 3; ++k) inst.toll.seat_thresholds[k] = static_cast<int>(thr.at(k).integer());
    }
  }

  if (root.has("dwell")) {
    const Node d = root.at("dwell");
    inst.dwell.seconds_per_passenger = d.number_or("seconds_per_passenger", inst.dwell.seconds_per_passenger);
    inst.dwell.seconds_per_parcel = d.number_or("seconds_per_parcel", inst.dwell.seconds_per_parcel);
    inst.dwell.cost_per_hour = d.number_or("cost_per_hour", inst.dwell.cost_per_hour);
  }

  if (root.has("capacity")) {
    const Node c = root.at("capacity");
    inst.seat_volume_m3 = c.number_or("seat_volume_m3", inst.seat_volume_m3);
    inst.parcel_volume_m3 = c.number_or("parcel_volume_m3", inst.seat_volume_m3 / 10.0);
  } else {
    inst.parcel_volume_m3 = inst.seat_volume_m3 / 10.0;
  }

  if (root.has("bpr")) {
    const Node b = root.at("bpr");
    inst.bpr.beta = b.number_or("beta", inst.bpr.beta);
    inst.bpr.power = b.number_or("z", inst.bpr.power);
    inst.bpr.sigma_min = b.number_or("sigma_min", inst.bpr.sigma_min);
    inst.bpr.skewness = b.number_or("skewness", inst.bpr.skewness);
    inst.bpr.kurtosis = b.number_or("kurtosis", inst.bpr.kurtosis);
  }

  if (root.has("reliability")) inst.reliability_gamma = root.at("reliability").number_or("gamma", 0.85);

  const Node limits = root.at("limits");
  inst.limits.t_max_min = limits.at("t_max_min").number();
  inst.limits.lambda_min = limits.at("lambda_min").number();
  if (limits.has("lambda_step_pct")) inst.limits.lambda_step_pct = static_cast<int>(limits.at("lambda_step_pct").integer());

  if (root.has("arrivals")) {
    const Node a = root.at("arrivals");
    const std::string model = a.has("model") ? a.at("model").string() : "headway";
    if (model == "headway")
      inst.arrivals.model = ArrivalModel::headway;
    else if (model == "lead")
      inst.arrivals.model = ArrivalModel::lead;
    else
      throw InstanceError(a.path() + "/model", "unknown arrival model '" + model + "'");
    inst.arrivals.lead_min = a.number_or("lead_min", inst.arrivals.lead_min);
  }

  if (root.has("carbon")) {
    const Node c = root.at("carbon");
    inst.carbon.diesel_kg_per_l = c.number_or("diesel_kg_per_l", inst.carbon.diesel_kg_per_l);
    inst.carbon.diesel_l_per_km = c.number_or("diesel_l_per_km", inst.carbon.diesel_l_per_km);
    inst.carbon.grid_kg_per_kwh = c.number_or("grid_kg_per_kwh", inst.carbon.grid_kg_per_kwh);
  }

  if (root.has("trucks")) {
    const Node t = root.at("trucks");
    TruckParams tp;
    tp.capacity_m3 = t.at("capacity_m3").number();
    tp.fuel_cost_per_km = t.at("fuel_cost_per_km").number();
    tp.purchasing_cost_per_day = t.at("purchasing_cost_per_day").number();
    tp.wage_per_day = t.at("wage_per_day").number();
    inst.trucks = tp;
  }
  return inst;
}

}  // namespace

Instance load_instance(std::istream& in) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InstanceError(line_col(text, e.byte == 0 ? 0 : e.byte - 1), "parse error: " + std::string(e.what()));
  }
  Instance inst = read_instance(Node(doc, ""));
  inst.finalize();
  return inst;
}

Instance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InstanceError(path, "cannot open instance file");
  try {
    return load_instance(in);
  } catch (const InstanceError& e) {
    throw InstanceError(e.where().empty() ? path : path + ":" + e.where(), e.detail());
  }
}

}  // namespace pfsm
