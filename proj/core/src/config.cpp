#include "sailhelm/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace sailhelm {

using nlohmann::json;

namespace {

// --- writing --------------------------------------------------------------

json curve_to_json(const PiecewiseLinear& curve) {
  json out = json::array();
  for (const auto& p : curve.points()) out.push_back({p.x, p.y});
  return out;
}

json histories_to_json(const HistoryMap& histories) {
  json out = json::object();
  for (const auto& [id, values] : histories) out[std::string(to_string(id))] = values;
  return out;
}

json to_json(const RunConfig& c) {
  json order = json::array();
  for (ProcedureId id : c.selector.initial_order) order.push_back(std::string(to_string(id)));

  json table = json::array();
  for (const auto& p : c.sheet_table.points()) table.push_back({p.angle, p.sheet});

  json waypoints = json::array();
  for (const auto& w : c.navigation.waypoints) waypoints.push_back({w.x, w.y});

  const SimConfig& s = c.sim;
  return {
      {"seed", c.seed},
      {"max_sim_time", c.max_sim_time},
      {"selector",
       {{"timeout", c.selector.timeout},
        {"exploration_coefficient", c.selector.exploration_coefficient},
        {"initial_order", order},
        {"initial_histories", histories_to_json(c.initial_histories)},
        {"state_file", c.state_file}}},
      {"procedures",
       {{"rudder_max", c.procedures.rudder_max},
        {"sheet_out_delta", c.procedures.sheet_out_delta},
        {"bear_away_duration", c.procedures.bear_away_duration},
        {"bear_away_angle", c.procedures.bear_away_angle}}},
      {"pid",
       {{"kp", c.pid.kp}, {"ki", c.pid.ki}, {"kd", c.pid.kd},
        {"integral_limit", c.pid.integral_limit}}},
      {"sheet_table", table},
      {"sim",
       {{"dt", s.dt},
        {"rudder_gain", s.rudder_gain},
        {"yaw_time_constant", s.yaw_time_constant},
        {"speed_time_constant", s.speed_time_constant},
        {"turn_drag_coefficient", s.turn_drag_coefficient},
        {"wave_yaw_gain", s.wave_yaw_gain},
        {"wave_speed_reference", s.wave_speed_reference},
        {"fall_off_gain", s.fall_off_gain},
        {"no_go_angle", s.no_go_angle},
        {"polar", curve_to_json(s.polar)},
        {"optimal_sheet", curve_to_json(s.optimal_sheet)},
        {"sheet_efficiency_floor", s.sheet_efficiency_floor},
        {"sheet_efficiency_width", s.sheet_efficiency_width},
        {"observation_noise_deg", s.observation_noise_deg},
        {"wind",
         {{"speed", c.wind.speed},
          {"from", c.wind.from},
          {"gust_std_ratio", c.wind.gust_std_ratio},
          {"gust_time_constant", c.wind.gust_time_constant},
          {"direction_drift_rate", c.wind.direction_drift_rate}}},
        {"waves", {{"height", c.waves.height}, {"period", c.waves.period}}}}},
      {"initial",
       {{"x", c.initial.x},
        {"y", c.initial.y},
        {"heading", c.initial.heading},
        {"speed", c.initial.speed ? json(*c.initial.speed) : json(nullptr)}}},
      {"navigation",
       {{"waypoints", waypoints},
        {"acceptance_radius", c.navigation.acceptance_radius},
        {"corridor_half_width", c.navigation.corridor_half_width},
        {"beat_angle", c.navigation.beat_angle},
        {"upwind_margin", c.navigation.upwind_margin}}},
      {"manual", {{"until", c.manual.until}, {"record_attempts", c.manual.record_attempts}}},
  };
}

// --- reading --------------------------------------------------------------

std::string dotted(const json::json_pointer& ptr) {
  std::string s = ptr.to_string();
  if (!s.empty() && s.front() == '/') s.erase(0, 1);
  for (char& ch : s) {
    if (ch == '/') ch = '.';
  }
  return s;
}

// Typed access with the dotted key in every error message.
class Reader {
 public:
  explicit Reader(const json& root) : root_(root) {}

  const json& at(const std::string& ptr) const {
    const json::json_pointer p(ptr);
    if (!root_.contains(p)) throw ConfigError("missing key: " + dotted(p));
    return root_.at(p);
  }

  double number(const std::string& ptr) const {
    const json& v = at(ptr);
    if (!v.is_number()) throw ConfigError(dotted(json::json_pointer(ptr)) + " must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(dotted(json::json_pointer(ptr)) + " must be finite");
    return d;
  }

  bool boolean(const std::string& ptr) const {
    const json& v = at(ptr);
    if (!v.is_boolean()) throw ConfigError(dotted(json::json_pointer(ptr)) + " must be true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& ptr) const {
    const json& v = at(ptr);
    if (!v.is_string()) throw ConfigError(dotted(json::json_pointer(ptr)) + " must be a string");
    return v.get<std::string>();
  }

  std::uint64_t unsigned_integer(const std::string& ptr) const {
    const json& v = at(ptr);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
      return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    throw ConfigError(dotted(json::json_pointer(ptr)) + " must be a non-negative integer");
  }

  std::vector<std::pair<double, double>> pairs(const std::string& ptr) const {
    const json& v = at(ptr);
    const std::string key = dotted(json::json_pointer(ptr));
    if (!v.is_array()) throw ConfigError(key + " must be a list of [a, b] pairs");
    std::vector<std::pair<double, double>> out;
    for (const auto& item : v) {
      if (!item.is_array() || item.size() != 2 || !item[0].is_number() || !item[1].is_number()) {
        throw ConfigError(key + " must be a list of [a, b] pairs");
      }
      out.emplace_back(item[0].get<double>(), item[1].get<double>());
    }
    return out;
  }

  ProcedureId procedure(const json& v, const std::string& key) const {
    if (!v.is_string()) throw ConfigError(key + " must name a procedure");
    const auto id = procedure_from_string(v.get<std::string>());
    if (!id) throw ConfigError(key + ": unknown procedure '" + v.get<std::string>() + "'");
    return *id;
  }

 private:
  const json& root_;
};

PiecewiseLinear curve_from(const Reader& r, const std::string& ptr) {
  std::vector<PiecewiseLinear::Point> pts;
  for (auto [x, y] : r.pairs(ptr)) pts.push_back({x, y});
  try {
    return PiecewiseLinear(std::move(pts));
  } catch (const InvalidInput& e) {
    throw ConfigError(dotted(json::json_pointer(ptr)) + ": " + e.what());
  }
}

HistoryMap histories_from(const Reader& r, const json& obj, const std::string& key) {
  if (!obj.is_object()) throw ConfigError(key + " must map procedure names to lists of seconds");
  HistoryMap out;
  for (const auto& [name, values] : obj.items()) {
    const ProcedureId id = r.procedure(json(name), key);
    if (!values.is_array()) throw ConfigError(key + "." + name + " must be a list of seconds");
    std::vector<double> times;
    for (const auto& v : values) {
      if (!v.is_number()) throw ConfigError(key + "." + name + " must be a list of seconds");
      times.push_back(v.get<double>());
    }
    out[id] = std::move(times);
  }
  return out;
}

RunConfig from_json(const json& j) {
  const Reader r(j);
  RunConfig c;
  c.seed = r.unsigned_integer("/seed");
  c.max_sim_time = r.number("/max_sim_time");

  c.selector.timeout = r.number("/selector/timeout");
  c.selector.exploration_coefficient = r.number("/selector/exploration_coefficient");
  const json& order = r.at("/selector/initial_order");
  if (!order.is_array()) throw ConfigError("selector.initial_order must be a list");
  c.selector.initial_order.clear();
  for (const auto& item : order) {
    c.selector.initial_order.push_back(r.procedure(item, "selector.initial_order"));
  }
  c.initial_histories =
      histories_from(r, r.at("/selector/initial_histories"), "selector.initial_histories");
  c.state_file = r.string("/selector/state_file");

  c.procedures.rudder_max = r.number("/procedures/rudder_max");
  c.procedures.sheet_out_delta = r.number("/procedures/sheet_out_delta");
  c.procedures.bear_away_duration = r.number("/procedures/bear_away_duration");
  c.procedures.bear_away_angle = r.number("/procedures/bear_away_angle");

  c.pid.kp = r.number("/pid/kp");
  c.pid.ki = r.number("/pid/ki");
  c.pid.kd = r.number("/pid/kd");
  c.pid.integral_limit = r.number("/pid/integral_limit");

  std::vector<SheetTable::Point> table;
  for (auto [a, s] : r.pairs("/sheet_table")) table.push_back({a, s});
  try {
    c.sheet_table = SheetTable(std::move(table));
  } catch (const InvalidInput& e) {
    throw ConfigError(std::string("sheet_table: ") + e.what());
  }

  SimConfig& s = c.sim;
  s.dt = r.number("/sim/dt");
  s.rudder_gain = r.number("/sim/rudder_gain");
  s.yaw_time_constant = r.number("/sim/yaw_time_constant");
  s.speed_time_constant = r.number("/sim/speed_time_constant");
  s.turn_drag_coefficient = r.number("/sim/turn_drag_coefficient");
  s.wave_yaw_gain = r.number("/sim/wave_yaw_gain");
  s.wave_speed_reference = r.number("/sim/wave_speed_reference");
  s.fall_off_gain = r.number("/sim/fall_off_gain");
  s.no_go_angle = r.number("/sim/no_go_angle");
  s.polar = curve_from(r, "/sim/polar");
  s.optimal_sheet = curve_from(r, "/sim/optimal_sheet");
  s.sheet_efficiency_floor = r.number("/sim/sheet_efficiency_floor");
  s.sheet_efficiency_width = r.number("/sim/sheet_efficiency_width");
  s.observation_noise_deg = r.number("/sim/observation_noise_deg");

  c.wind.speed = r.number("/sim/wind/speed");
  c.wind.from = r.number("/sim/wind/from");
  c.wind.gust_std_ratio = r.number("/sim/wind/gust_std_ratio");
  c.wind.gust_time_constant = r.number("/sim/wind/gust_time_constant");
  c.wind.direction_drift_rate = r.number("/sim/wind/direction_drift_rate");
  c.waves.height = r.number("/sim/waves/height");
  c.waves.period = r.number("/sim/waves/period");

  c.initial.x = r.number("/initial/x");
  c.initial.y = r.number("/initial/y");
  c.initial.heading = r.number("/initial/heading");
  if (r.at("/initial/speed").is_null()) {
    c.initial.speed.reset();
  } else {
    c.initial.speed = r.number("/initial/speed");
  }

  c.navigation.waypoints.clear();
  for (auto [x, y] : r.pairs("/navigation/waypoints")) c.navigation.waypoints.push_back({x, y});
  c.navigation.acceptance_radius = r.number("/navigation/acceptance_radius");
  c.navigation.corridor_half_width = r.number("/navigation/corridor_half_width");
  c.navigation.beat_angle = r.number("/navigation/beat_angle");
  c.navigation.upwind_margin = r.number("/navigation/upwind_margin");

  c.manual.until = r.number("/manual/until");
  c.manual.record_attempts = r.boolean("/manual/record_attempts");

  c.validate();
  return c;
}

// Objects merge key by key; anything else (including maps that start empty,
// such as initial_histories) is replaced wholesale.
void overlay(json& base, const json& patch, const std::string& where) {
  if (!patch.is_object()) throw ConfigError((where.empty() ? "config" : where) + " must be an object");
  for (const auto& [key, value] : patch.items()) {
    const std::string path = where.empty() ? key : where + "." + key;
    if (!base.contains(key)) throw ConfigError("unknown key: " + path);
    json& slot = base[key];
    if (slot.is_object() && !slot.empty()) {
      overlay(slot, value, path);
    } else {
      slot = value;
    }
  }
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override must look like key=value, got '" + assignment + "'");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);

  std::string ptr_text;
  std::istringstream parts(key);
  for (std::string part; std::getline(parts, part, '.');) {
    if (part.empty()) throw ConfigError("malformed override key '" + key + "'");
    ptr_text += "/" + part;
  }
  const json::json_pointer ptr(ptr_text);
  const bool history_key = ptr.parent_pointer().to_string() == "/selector/initial_histories";
  if (!doc.contains(ptr) && !history_key) throw ConfigError("unknown key: " + key);
  if (doc.contains(ptr) && doc.at(ptr).is_object() && !doc.at(ptr).empty()) {
    throw ConfigError("override must name a leaf value, got section '" + key + "'");
  }

  json value = json::parse(raw, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded()) value = raw;
  doc[ptr] = std::move(value);
}

}  // namespace

// --- RunConfig --------------------------------------------------------------

void RunConfig::validate() const {
  try {
    selector.validate();
    procedures.validate();
    pid.validate();
    sim.validate();
    initial_env().validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  if (!(max_sim_time > 0.0)) throw ConfigError("max_sim_time must be > 0");
  for (const auto& [id, values] : initial_histories) {
    if (std::find(selector.initial_order.begin(), selector.initial_order.end(), id) ==
        selector.initial_order.end()) {
      throw ConfigError("initial history for " + std::string(to_string(id)) +
                        ", which is not in selector.initial_order");
    }
    for (double v : values) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw ConfigError("initial history values must be finite and > 0");
      }
    }
  }
  if (!(wind.speed >= 0.0)) throw ConfigError("sim.wind.speed must be >= 0");
  if (!(wind.gust_std_ratio >= 0.0)) throw ConfigError("sim.wind.gust_std_ratio must be >= 0");
  if (initial.speed && !(*initial.speed >= 0.0)) throw ConfigError("initial.speed must be >= 0");
  if (navigation.waypoints.empty()) throw ConfigError("navigation.waypoints needs at least one point");
  if (!(navigation.acceptance_radius > 0.0)) {
    throw ConfigError("navigation.acceptance_radius must be > 0");
  }
  if (!(navigation.corridor_half_width > 0.0)) {
    throw ConfigError("navigation.corridor_half_width must be > 0");
  }
  if (!(navigation.beat_angle > sim.no_go_angle && navigation.beat_angle < 90.0)) {
    throw ConfigError("navigation.beat_angle must lie between sim.no_go_angle and 90");
  }
  if (!(navigation.upwind_margin >= 0.0)) throw ConfigError("navigation.upwind_margin must be >= 0");
  if (!(manual.until >= 0.0)) throw ConfigError("manual.until must be >= 0");
}

HelmConfig RunConfig::helm_config() const {
  HelmConfig h;
  h.selector = selector;
  h.procedures = procedures;
  h.pid = pid;
  h.sheet_table = sheet_table;
  return h;
}

EnvState RunConfig::initial_env() const {
  EnvState env;
  env.mean_wind = WindVector(Bearing(wind.from), wind.speed);
  env.gust_std = wind.gust_std_ratio * wind.speed;
  env.gust_time_constant = wind.gust_time_constant;
  env.direction_drift_rate = wind.direction_drift_rate;
  env.wave_height = waves.height;
  env.wave_period = waves.period;
  return env;
}

RunConfig parse_run_config(std::string_view json_text, const std::vector<std::string>& overrides) {
  json user = json::parse(json_text, nullptr, /*allow_exceptions=*/false, /*ignore_comments=*/true);
  if (user.is_discarded()) throw ConfigError("config is not valid JSON");
  json doc = to_json(RunConfig{});
  overlay(doc, user, "");
  for (const auto& o : overrides) apply_override(doc, o);
  return from_json(doc);
}

RunConfig load_run_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_run_config(buf.str(), overrides);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string dump_run_config(const RunConfig& config) { return to_json(config).dump(2) + "\n"; }

// --- persisted histories ----------------------------------------------------

HistoryMap histories_of(const SelectorState& selector) {
  HistoryMap out;
  for (const auto& e : selector.entries()) {
    const auto v = e.time_list.values();
    out[e.procedure] = std::vector<double>(v.begin(), v.end());
  }
  return out;
}

HistoryMap load_state_file(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return {};
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open state file " + path.string());
  json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("histories")) {
    throw ConfigError(path.string() + ": expected an object with a 'histories' map");
  }
  const Reader r(doc);
  return histories_from(r, doc.at("histories"), "histories");
}

void save_state_file(const std::filesystem::path& path, const HistoryMap& histories) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write state file " + path.string());
  out << json{{"histories", histories_to_json(histories)}}.dump(2) << "\n";
}

}  // namespace sailhelm
