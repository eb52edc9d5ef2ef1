#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gmimo/geometry.hpp"

namespace gmimo::cli {

using Vec3 = std::array<double, 3>;

// Raised when a config cannot be parsed or validated. Holds every problem
// found, each prefixed with the offending field path.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

struct SubarrayConfig {
  int elements = 0;
  Vec3 center{0, 0, 0};
  Vec3 axis{1, 0, 0};
  bool operator==(const SubarrayConfig&) const = default;
};

// type "ula": either `elements` or `aperture_m` (largest half-wavelength
// count that fits, at least one); type "distributed": `subarrays`.
struct GeometryConfig {
  std::string type = "ula";
  std::optional<int> elements;
  std::optional<double> aperture_m;
  Vec3 center{0, 0, 0};
  Vec3 axis{1, 0, 0};
  std::vector<SubarrayConfig> subarrays;
  int ports_per_element = 1;
  bool operator==(const GeometryConfig&) const = default;
};

ArrayGeometry build_geometry(const GeometryConfig& config, double frequency);

struct PeakRateConfig {
  double bits_per_symbol = 12.0;
  double streams = 16.0;
  double bandwidth_hz = 1.2e9;
  double target_rate_bps = 200e9;
  bool operator==(const PeakRateConfig&) const = default;
};

struct ScaleParams {
  double baseline_hz = 3.5e9;
  std::vector<double> targets_hz{7.8e9, 15e9};
  std::vector<double> ue_multipliers{1, 2, 4};
  double aperture_m = 0.5;
  PeakRateConfig peak_rate;
  bool operator==(const ScaleParams&) const = default;
};

struct GridConfig {
  double x_min_m = -50.0;
  double x_max_m = 50.0;
  double y_min_m = 0.0;
  double y_max_m = 100.0;
  double step_m = 0.25;
  bool operator==(const GridConfig&) const = default;
};

struct BeamfocusParams {
  double frequency_hz = 15e9;
  std::map<std::string, GeometryConfig> arrays;
  Vec3 focus_m{0, 30, 0};
  GridConfig grid;
  bool operator==(const BeamfocusParams&) const = default;
};

struct SourceConfig {
  double azimuth_deg = 0.0;
  double range_m = 0.0;
  double power = 1.0;
  bool operator==(const SourceConfig&) const = default;
};

struct MusicGridConfig {
  double azimuth_min_deg = -60.0;
  double azimuth_max_deg = 60.0;
  double azimuth_step_deg = 0.25;
  double range_min_m = 10.0;
  double range_max_m = 100.0;
  double range_step_m = 0.5;
  bool operator==(const MusicGridConfig&) const = default;
};

struct MusicParams {
  double frequency_hz = 15e9;
  GeometryConfig array;
  std::vector<SourceConfig> sources;
  double snr_db = 20.0;  // per source and element, relative to unit power
  int snapshots = 200;
  std::uint64_t seed = 0;
  std::optional<int> model_order;  // defaults to the source count
  MusicGridConfig grid;
  double peak_threshold = 0.3;
  int peak_min_separation = 2;
  double tolerance_azimuth_deg = 1.0;
  double tolerance_range_m = 2.0;
  bool operator==(const MusicParams&) const = default;
};

struct ChannelConfig {
  int clusters = 6;
  double rician_k_db = 10.0;
  double cross_polar_ratio_db = 10.0;
  double bandwidth_hz = 100e6;
  double noise_figure_db = 9.0;
  double tx_power_w_per_hz = 1e-6;
  bool path_loss = true;
  bool operator==(const ChannelConfig&) const = default;
};

struct CapacityParams {
  double frequency_hz = 3.5e9;
  GeometryConfig bs;
  GeometryConfig ue;
  int users = 4;
  double min_range_m = 20.0;
  double max_range_m = 500.0;
  double max_azimuth_deg = 60.0;
  ChannelConfig channel;
  int drops = 200;
  std::uint64_t seed = 0;  // drop i uses seed + i
  bool operator==(const CapacityParams&) const = default;
};

struct LinkBudgetParams {
  double tx_power_w = 1.0;
  double tx_area_m2 = 0.25;
  double rx_area_m2 = 0.25;
  std::vector<double> frequencies_hz{3.5e9};
  std::vector<double> distances_m{100.0};
  std::vector<double> bandwidths_hz{100e6};
  double noise_figure_db = 9.0;
  bool operator==(const LinkBudgetParams&) const = default;
};

using ExperimentParams = std::variant<ScaleParams, BeamfocusParams, MusicParams, CapacityParams, LinkBudgetParams>;

struct ScenarioConfig {
  std::string output_prefix;
  ExperimentParams params;
  bool operator==(const ScenarioConfig&) const = default;

  std::string experiment() const;
};

const std::vector<std::string>& experiment_names();

// Parses and fully validates a JSON config. Throws ConfigError listing every
// problem; syntax errors carry line and column.
ScenarioConfig parse_config(std::string_view text);

// Canonical JSON text; parse_config(serialize(c)) == c.
std::string serialize(const ScenarioConfig& config);

}  // namespace gmimo::cli
