#include "mmnoma/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace mmnoma {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError(path + ": " + message);
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) fail(path, "expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) fail(path + "." + item.key(), "unknown key");
  }
}

double get_number(const json& obj, const std::string& path, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path + "." + key, "must be finite");
  return x;
}

int get_int(const json& obj, const std::string& path, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<int>();
}

bool get_bool(const json& obj, const std::string& path, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) fail(path + "." + key, "expected true or false");
  return v.get<bool>();
}

std::string get_string(const json& obj, const std::string& path, const char* key,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

std::vector<double> get_numbers(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) fail(path + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

template <typename E>
E parse_with_path(const std::string& path, const std::string& value, E (*parser)(const std::string&)) {
  try {
    return parser(value);
  } catch (const ConfigError& e) {
    fail(path, e.what());
  }
}

std::string orientation_name(OrientationKind k) {
  switch (k) {
    case OrientationKind::TriangularAroundCenter: return "triangular";
    case OrientationKind::UniformCircle: return "uniform";
    case OrientationKind::Fixed: return "fixed";
  }
  return "triangular";
}

void parse_venue(const json& v, VenueConfig& out) {
  const std::string p = "venue";
  check_keys(v, p,
             {"grid", "seats", "ap_positions", "heights_m", "body_radius_m", "orientation"});
  if (v.contains("grid") && v.contains("seats")) fail(p, "give either grid or seats, not both");
  if (v.contains("grid")) {
    const json& g = v.at("grid");
    const std::string gp = p + ".grid";
    check_keys(g, gp,
               {"rows", "cols", "row_pitch", "col_pitch", "rake_per_row", "first_row_distance"});
    GridSpec spec = out.grid.value_or(GridSpec{});
    spec.rows = get_int(g, gp, "rows", spec.rows);
    spec.cols = get_int(g, gp, "cols", spec.cols);
    spec.row_pitch = get_number(g, gp, "row_pitch", spec.row_pitch);
    spec.col_pitch = get_number(g, gp, "col_pitch", spec.col_pitch);
    spec.rake_per_row = get_number(g, gp, "rake_per_row", spec.rake_per_row);
    spec.first_row_distance = get_number(g, gp, "first_row_distance", spec.first_row_distance);
    out.grid = spec;
    out.seats.clear();
  }
  if (v.contains("seats")) {
    const json& s = v.at("seats");
    if (!s.is_array()) fail(p + ".seats", "expected an array");
    out.grid.reset();
    out.seats.clear();
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string sp = p + ".seats[" + std::to_string(i) + "]";
      const auto xs = get_numbers(s[i], sp);
      if (xs.size() != 2 && xs.size() != 3) fail(sp, "expected [x, y] or [x, y, platform]");
      out.seats.push_back({xs[0], xs[1], xs.size() == 3 ? xs[2] : 0.0});
    }
  }
  if (v.contains("ap_positions")) {
    const json& a = v.at("ap_positions");
    if (!a.is_array()) fail(p + ".ap_positions", "expected an array");
    out.ap_positions.clear();
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::string ap = p + ".ap_positions[" + std::to_string(i) + "]";
      const auto xs = get_numbers(a[i], ap);
      if (xs.size() != 2 && xs.size() != 3) fail(ap, "expected [x, y] or [x, y, z]");
      out.ap_positions.push_back({xs[0], xs[1], xs.size() == 3 ? xs[2] : -1.0});
    }
  }
  if (v.contains("heights_m")) {
    const json& h = v.at("heights_m");
    const std::string hp = p + ".heights_m";
    check_keys(h, hp, {"h_ap", "h_md", "h_person"});
    out.ap_height = get_number(h, hp, "h_ap", out.ap_height);
    out.body.device_height = get_number(h, hp, "h_md", out.body.device_height);
    out.body.person_height = get_number(h, hp, "h_person", out.body.person_height);
  }
  out.body.body_radius = get_number(v, p, "body_radius_m", out.body.body_radius);
  if (v.contains("orientation")) {
    const json& o = v.at("orientation");
    const std::string op = p + ".orientation";
    check_keys(o, op, {"kind", "half_width_rad"});
    const std::string kind = get_string(o, op, "kind", orientation_name(out.orientation.kind));
    if (kind == "triangular") {
      out.orientation.kind = OrientationKind::TriangularAroundCenter;
    } else if (kind == "uniform") {
      out.orientation.kind = OrientationKind::UniformCircle;
    } else if (kind == "fixed") {
      out.orientation.kind = OrientationKind::Fixed;
    } else {
      fail(op + ".kind", "expected triangular, uniform or fixed");
    }
    out.orientation.half_width = get_number(o, op, "half_width_rad", out.orientation.half_width);
  }
}

}  // namespace

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::Noma: return "noma";
    case Scheme::Oma: return "oma";
    case Scheme::Both: return "both";
  }
  return "both";
}

std::string to_string(OracleMode m) {
  switch (m) {
    case OracleMode::None: return "none";
    case OracleMode::Schedule: return "schedule";
    case OracleMode::Antenna: return "antenna";
    case OracleMode::Full: return "full";
  }
  return "none";
}

std::string to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::None: return "none";
    case SweepAxis::PTotal: return "p_total";
    case SweepAxis::MAp: return "M_AP";
    case SweepAxis::B: return "B";
  }
  return "none";
}

std::string to_string(BlockedSteering b) {
  return b == BlockedSteering::Geometric ? "geometric" : "strongest_path";
}

Scheme parse_scheme(const std::string& s) {
  if (s == "noma") return Scheme::Noma;
  if (s == "oma") return Scheme::Oma;
  if (s == "both") return Scheme::Both;
  throw ConfigError("scheme must be noma, oma or both");
}

OracleMode parse_oracle(const std::string& s) {
  if (s == "none") return OracleMode::None;
  if (s == "schedule") return OracleMode::Schedule;
  if (s == "antenna") return OracleMode::Antenna;
  if (s == "full") return OracleMode::Full;
  throw ConfigError("oracle must be none, schedule, antenna or full");
}

SweepAxis parse_sweep_axis(const std::string& s) {
  if (s == "none") return SweepAxis::None;
  if (s == "p_total") return SweepAxis::PTotal;
  if (s == "M_AP") return SweepAxis::MAp;
  if (s == "B") return SweepAxis::B;
  throw ConfigError("sweep axis must be none, p_total, M_AP or B");
}

BlockedSteering parse_blocked_steering(const std::string& s) {
  if (s == "strongest_path") return BlockedSteering::StrongestPath;
  if (s == "geometric") return BlockedSteering::Geometric;
  throw ConfigError("channel.blocked_steering must be strongest_path or geometric");
}

VenueConfig default_venue() {
  VenueConfig v;
  v.grid = GridSpec{10, 12, 0.9, 0.6, 0.15, 2.0};
  v.ap_positions = {{-4.5, 6.0, -1.0}, {4.5, 6.0, -1.0}, {0.0, 0.5, -1.0}};
  return v;
}

ExperimentConfig parse_config(const json& input) {
  const json& doc = input.contains("config") && input.at("config").is_object() ? input.at("config")
                                                                               : input;
  check_keys(doc, "config", {"venue", "experiment", "channel", "sa", "dc", "grouping"});
  ExperimentConfig c;
  c.venue = default_venue();
  if (doc.contains("venue")) parse_venue(doc.at("venue"), c.venue);

  if (doc.contains("experiment")) {
    const json& e = doc.at("experiment");
    const std::string p = "experiment";
    check_keys(e, p,
               {"users", "aps", "rf_chains", "ap_antennas", "md_antennas", "min_antennas",
                "p_total_dbm", "noise_dbm", "r_min", "scheme", "runs", "base_seed", "blockage",
                "sweep", "oracle", "enumeration_cap", "workers"});
    c.users = get_int(e, p, "users", c.users);
    c.aps = get_int(e, p, "aps", c.aps);
    c.rf_chains = get_int(e, p, "rf_chains", c.rf_chains);
    c.ap_antennas = get_int(e, p, "ap_antennas", c.ap_antennas);
    c.md_antennas = get_int(e, p, "md_antennas", c.md_antennas);
    c.min_antennas = get_int(e, p, "min_antennas", c.min_antennas);
    c.p_total_dbm = get_number(e, p, "p_total_dbm", c.p_total_dbm);
    c.noise_dbm = get_number(e, p, "noise_dbm", c.noise_dbm);
    c.r_min = get_number(e, p, "r_min", c.r_min);
    c.scheme = parse_with_path(p + ".scheme", get_string(e, p, "scheme", to_string(c.scheme)),
                               &parse_scheme);
    c.runs = get_int(e, p, "runs", c.runs);
    if (e.contains("base_seed")) {
      const json& s = e.at("base_seed");
      if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() && s.get<long long>() < 0)) {
        fail(p + ".base_seed", "expected a non-negative integer");
      }
      c.base_seed = s.get<std::uint64_t>();
    }
    c.blockage = get_bool(e, p, "blockage", c.blockage);
    if (e.contains("sweep")) {
      const json& s = e.at("sweep");
      check_keys(s, p + ".sweep", {"axis", "values"});
      c.sweep_axis = parse_with_path(p + ".sweep.axis", get_string(s, p + ".sweep", "axis", "none"),
                                     &parse_sweep_axis);
      c.sweep_values = s.contains("values") ? get_numbers(s.at("values"), p + ".sweep.values")
                                            : std::vector<double>{};
    }
    c.oracle = parse_with_path(p + ".oracle", get_string(e, p, "oracle", to_string(c.oracle)),
                               &parse_oracle);
    c.enumeration_cap = get_number(e, p, "enumeration_cap", c.enumeration_cap);
    c.workers = get_int(e, p, "workers", c.workers);
  }
  if (doc.contains("channel")) {
    const json& ch = doc.at("channel");
    const std::string p = "channel";
    check_keys(ch, p,
               {"carrier_hz", "nlos_paths", "los_exponent", "nlos_exponent", "blocked_steering"});
    c.channel.carrier_hz = get_number(ch, p, "carrier_hz", c.channel.carrier_hz);
    c.channel.nlos_paths = get_int(ch, p, "nlos_paths", c.channel.nlos_paths);
    c.channel.los_exponent = get_number(ch, p, "los_exponent", c.channel.los_exponent);
    c.channel.nlos_exponent = get_number(ch, p, "nlos_exponent", c.channel.nlos_exponent);
    if (ch.contains("blocked_steering")) {
      c.channel.blocked_steering =
          parse_blocked_steering(get_string(ch, p, "blocked_steering", ""));
    }
  }
  if (doc.contains("sa")) {
    const json& s = doc.at("sa");
    const std::string p = "sa";
    check_keys(s, p, {"t0", "beta", "tmax", "eps1"});
    c.sa.t0 = get_number(s, p, "t0", c.sa.t0);
    c.sa.beta = get_number(s, p, "beta", c.sa.beta);
    c.sa.tmax = get_int(s, p, "tmax", c.sa.tmax);
    c.sa.eps1 = get_number(s, p, "eps1", c.sa.eps1);
  }
  if (doc.contains("dc")) {
    const json& d = doc.at("dc");
    const std::string p = "dc";
    check_keys(d, p, {"outer_tolerance", "max_outer_iterations", "gap_tolerance", "max_newton_steps"});
    c.dc.outer_tolerance = get_number(d, p, "outer_tolerance", c.dc.outer_tolerance);
    c.dc.max_outer_iterations = get_int(d, p, "max_outer_iterations", c.dc.max_outer_iterations);
    c.dc.inner.gap_tolerance = get_number(d, p, "gap_tolerance", c.dc.inner.gap_tolerance);
    c.dc.inner.max_newton_steps = get_int(d, p, "max_newton_steps", c.dc.inner.max_newton_steps);
  }
  if (doc.contains("grouping")) {
    const json& g = doc.at("grouping");
    check_keys(g, "grouping", {"w1"});
    c.weights.corr = get_number(g, "grouping", "w1", c.weights.corr);
    c.weights.diff = 1.0 - c.weights.corr;
  }
  c.channel.md_antennas = c.md_antennas;
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": invalid JSON: " + e.what());
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& c) {
  json venue;
  if (c.venue.grid) {
    const GridSpec& g = *c.venue.grid;
    venue["grid"] = {{"rows", g.rows},
                     {"cols", g.cols},
                     {"row_pitch", g.row_pitch},
                     {"col_pitch", g.col_pitch},
                     {"rake_per_row", g.rake_per_row},
                     {"first_row_distance", g.first_row_distance}};
  } else {
    json seats = json::array();
    for (const auto& s : c.venue.seats) seats.push_back({s.x, s.y, s.platform});
    venue["seats"] = seats;
  }
  json aps = json::array();
  for (const Position3& p : c.venue.ap_positions) {
    aps.push_back({p.x, p.y, p.z < 0.0 ? c.venue.ap_height : p.z});
  }
  venue["ap_positions"] = aps;
  venue["heights_m"] = {{"h_ap", c.venue.ap_height},
                        {"h_md", c.venue.body.device_height},
                        {"h_person", c.venue.body.person_height}};
  venue["body_radius_m"] = c.venue.body.body_radius;
  venue["orientation"] = {{"kind", orientation_name(c.venue.orientation.kind)},
                          {"half_width_rad", c.venue.orientation.half_width}};
  json doc;
  doc["venue"] = venue;
  doc["experiment"] = {{"users", c.users},
                       {"aps", c.aps},
                       {"rf_chains", c.rf_chains},
                       {"ap_antennas", c.ap_antennas},
                       {"md_antennas", c.md_antennas},
                       {"min_antennas", c.min_antennas},
                       {"p_total_dbm", c.p_total_dbm},
                       {"noise_dbm", c.noise_dbm},
                       {"r_min", c.r_min},
                       {"scheme", to_string(c.scheme)},
                       {"runs", c.runs},
                       {"base_seed", c.base_seed},
                       {"blockage", c.blockage},
                       {"sweep", {{"axis", to_string(c.sweep_axis)}, {"values", c.sweep_values}}},
                       {"oracle", to_string(c.oracle)},
                       {"enumeration_cap", c.enumeration_cap},
                       {"workers", c.workers}};
  doc["channel"] = {{"carrier_hz", c.channel.carrier_hz},
                    {"nlos_paths", c.channel.nlos_paths},
                    {"los_exponent", c.channel.los_exponent},
                    {"nlos_exponent", c.channel.nlos_exponent},
                    {"blocked_steering", to_string(c.channel.blocked_steering)}};
  doc["sa"] = {{"t0", c.sa.t0}, {"beta", c.sa.beta}, {"tmax", c.sa.tmax}, {"eps1", c.sa.eps1}};
  doc["dc"] = {{"outer_tolerance", c.dc.outer_tolerance},
               {"max_outer_iterations", c.dc.max_outer_iterations},
               {"gap_tolerance", c.dc.inner.gap_tolerance},
               {"max_newton_steps", c.dc.inner.max_newton_steps}};
  doc["grouping"] = {{"w1", c.weights.corr}};
  return doc;
}

void validate(const ExperimentConfig& c) {
  auto need = [](bool ok, const char* path, const char* msg) {
    if (!ok) fail(path, msg);
  };
  need(c.users >= 1, "experiment.users", "must be >= 1");
  need(c.aps >= 0, "experiment.aps", "must be >= 0 (0 = all)");
  need(c.aps <= static_cast<int>(c.venue.ap_positions.size()), "experiment.aps",
       "exceeds the number of venue APs");
  need(c.rf_chains >= 1, "experiment.rf_chains", "must be >= 1");
  need(c.ap_antennas >= 6 && c.ap_antennas % 6 == 0, "experiment.ap_antennas",
       "must be a positive multiple of 6");
  need(c.md_antennas >= 1, "experiment.md_antennas", "must be >= 1");
  need(c.min_antennas >= 0 && 2 * c.min_antennas <= c.ap_antennas, "experiment.min_antennas",
       "must lie in [0, ap_antennas / 2]");
  need(c.r_min >= 0.0, "experiment.r_min", "must be >= 0");
  need(c.runs >= 1, "experiment.runs", "must be >= 1");
  need(c.workers >= 1, "experiment.workers", "must be >= 1");
  need(c.enumeration_cap >= 1.0, "experiment.enumeration_cap", "must be >= 1");
  need((c.sweep_axis == SweepAxis::None) == c.sweep_values.empty(), "experiment.sweep",
       "values must be given exactly when an axis is set");
  for (double v : c.sweep_values) {
    if (c.sweep_axis == SweepAxis::MAp) {
      need(v == std::floor(v) && v >= 6 && static_cast<int>(v) % 6 == 0, "experiment.sweep.values",
           "M_AP values must be positive multiples of 6");
    }
    if (c.sweep_axis == SweepAxis::B) {
      need(v == std::floor(v) && v >= 1 && v <= c.venue.ap_positions.size(),
           "experiment.sweep.values", "B values must be between 1 and the number of venue APs");
    }
  }
  need(c.channel.carrier_hz > 0.0, "channel.carrier_hz", "must be positive");
  need(c.channel.nlos_paths >= 0, "channel.nlos_paths", "must be >= 0");
  need(c.channel.los_exponent > 0.0 && c.channel.nlos_exponent > 0.0, "channel",
       "path loss exponents must be positive");
  need(c.weights.corr > 0.0 && c.weights.corr < 1.0, "grouping.w1", "must lie in (0, 1)");
  need(c.dc.outer_tolerance > 0.0, "dc.outer_tolerance", "must be positive");
  need(c.dc.max_outer_iterations >= 1, "dc.max_outer_iterations", "must be >= 1");
  need(c.dc.inner.gap_tolerance > 0.0, "dc.gap_tolerance", "must be positive");
  need(c.dc.inner.max_newton_steps >= 1, "dc.max_newton_steps", "must be >= 1");
  need(c.venue.body.body_radius > 0.0, "venue.body_radius_m", "must be positive");
  need(c.venue.ap_height > c.venue.body.device_height, "venue.heights_m.h_ap",
       "must exceed the device height");
  need(!c.venue.ap_positions.empty(), "venue.ap_positions", "at least one AP is required");
  try {
    validate(c.sa);
  } catch (const ConfigError& e) {
    fail("sa", e.what());
  }
  // Capacity: every user needs a group slot on the APs in use.
  int max_aps = c.aps > 0 ? c.aps : static_cast<int>(c.venue.ap_positions.size());
  if (c.sweep_axis == SweepAxis::B) {
    for (double v : c.sweep_values) max_aps = std::min(max_aps, static_cast<int>(v));
  }
  need(c.users <= 2 * c.rf_chains * max_aps, "experiment.users", "exceeds 2 * rf_chains * aps");
}

VenueScenario build_scenario(const ExperimentConfig& c) {
  std::vector<Position3> aps;
  for (const Position3& p : c.venue.ap_positions) {
    aps.push_back({p.x, p.y, p.z < 0.0 ? c.venue.ap_height : p.z});
  }
  VenueScenario s;
  if (c.venue.grid) {
    s = generate_grid_venue(*c.venue.grid, aps, c.venue.body, c.ap_antennas, c.rf_chains);
  } else {
    for (const auto& seat : c.venue.seats)
      s.seats.push_back(make_seat(seat.x, seat.y, seat.platform, c.venue.body));
    for (const Position3& p : aps) s.aps.push_back({p, c.ap_antennas, c.rf_chains});
    s.body = c.venue.body;
  }
  s.orientation = c.venue.orientation;
  validate_scenario(s);
  if (static_cast<int>(s.seats.size()) < c.users) {
    throw ConfigError("experiment.users: more users than seats in the venue");
  }
  return s;
}

PipelineConfig pipeline_config(const ExperimentConfig& c) {
  PipelineConfig p;
  p.system.ap_antennas = c.ap_antennas;
  p.system.rf_chains = c.rf_chains;
  p.system.min_antennas = c.min_antennas;
  p.system.noise_power = dbm_to_watts(c.noise_dbm);
  p.system.total_power = dbm_to_watts(c.p_total_dbm);
  p.system.min_rate = c.r_min;
  p.weights = c.weights;
  p.sa = c.sa;
  p.dc = c.dc;
  return p;
}

}  // namespace mmnoma
