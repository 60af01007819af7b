#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmnoma/oracle.hpp"

namespace mmnoma {

struct VenueConfig {
  std::optional<GridSpec> grid;
  struct Seat {
    double x = 0.0;
    double y = 0.0;
    double platform = 0.0;
  };
  std::vector<Seat> seats;  // used when grid is empty
  /// (x, y, z); z < 0 means "use ap_height".
  std::vector<Position3> ap_positions;
  double ap_height = 4.0;
  BodyModel body;
  OrientationModel orientation;
};

enum class Scheme { Noma, Oma, Both };
enum class OracleMode { None, Schedule, Antenna, Full };
enum class SweepAxis { None, PTotal, MAp, B };

std::string to_string(Scheme s);
std::string to_string(OracleMode m);
std::string to_string(SweepAxis a);
std::string to_string(BlockedSteering b);
Scheme parse_scheme(const std::string& s);
OracleMode parse_oracle(const std::string& s);
SweepAxis parse_sweep_axis(const std::string& s);
BlockedSteering parse_blocked_steering(const std::string& s);

struct ExperimentConfig {
  VenueConfig venue;
  int users = 8;
  int aps = 0;  // 0 = every AP in the venue
  int rf_chains = 2;
  int ap_antennas = 24;
  int md_antennas = 15;
  int min_antennas = 0;  // 0 = ap_antennas / 6
  double p_total_dbm = 30.0;
  double noise_dbm = -80.0;
  double r_min = 0.25;
  Scheme scheme = Scheme::Both;
  int runs = 10;
  std::uint64_t base_seed = 1;
  bool blockage = true;
  SweepAxis sweep_axis = SweepAxis::None;
  std::vector<double> sweep_values;
  OracleMode oracle = OracleMode::None;
  double enumeration_cap = kDefaultEnumerationCap;
  int workers = 1;
  ChannelParams channel;
  SaConfig sa;
  DcOptions dc;
  GroupingWeights weights;
};

/// Default venue: 10 x 12 raked seating block facing a stage at the origin,
/// three ceiling APs (two side walls, one above the stage).
VenueConfig default_venue();

/// Parses a config document, or a metadata document holding one under
/// "config". Missing keys take defaults; unknown keys and bad values raise
/// ConfigError naming the field path.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Fully resolved config (every key present).
nlohmann::json to_json(const ExperimentConfig& config);

/// Range and consistency checks; throws ConfigError.
void validate(const ExperimentConfig& config);

VenueScenario build_scenario(const ExperimentConfig& config);

/// Pipeline parameters for one sweep point.
PipelineConfig pipeline_config(const ExperimentConfig& config);

}  // namespace mmnoma
