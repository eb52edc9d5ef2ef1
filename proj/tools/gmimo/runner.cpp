#include "gmimo/runner.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "gmimo/beamfocus.hpp"
#include "gmimo/csv.hpp"
#include "gmimo/errors.hpp"
#include "gmimo/localize.hpp"
#include "gmimo/mumimo.hpp"
#include "gmimo/version.hpp"
#include "gmimo/wavefield.hpp"

namespace gmimo::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kDegree = kPi / 180.0;

// Result files written into a private staging directory.
class Staging {
 public:
  Staging(const fs::path& out_dir, const std::string& prefix) : out_dir_(out_dir) {
    dir_ = out_dir / ("." + prefix + ".staging");
    std::error_code ec;
    fs::remove_all(dir_, ec);
    if (!fs::create_directories(dir_, ec) && ec) {
      throw IoError("cannot create staging directory " + dir_.string() + ": " + ec.message());
    }
  }

  ~Staging() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }

  Staging(const Staging&) = delete;
  Staging& operator=(const Staging&) = delete;

  template <typename Writer>
  void write(const std::string& name, Writer&& writer) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw IoError("cannot open " + (dir_ / name).string() + " for writing");
    writer(out);
    out.flush();
    if (!out) throw IoError("failed writing " + (dir_ / name).string());
    names_.push_back(name);
  }

  void write_json(const std::string& name, const json& value) {
    write(name, [&](std::ostream& out) { out << value.dump(2) << '\n'; });
  }

  std::vector<std::string> commit() {
    for (const std::string& name : names_) {
      std::error_code ec;
      fs::rename(dir_ / name, out_dir_ / name, ec);
      if (ec) throw IoError("cannot move " + name + " into " + out_dir_.string() + ": " + ec.message());
    }
    return names_;
  }

 private:
  fs::path out_dir_;
  fs::path dir_;
  std::vector<std::string> names_;
};

double round_to_tenth(double v) { return std::round(v * 10.0) / 10.0; }

void run_scale(const ScaleParams& p, const std::string& prefix, Staging& staging) {
  staging.write(prefix + "_scaling.csv", [&](std::ostream& out) {
    out << "carrier_hz,ue_antenna_multiplier,bs_antenna_factor,bs_antenna_factor_rounded,beamwidth_ratio,"
           "elements_per_side\n";
    for (double f : p.targets_hz) {
      for (double k : p.ue_multipliers) {
        const double factor = bs_antenna_scaling_factor(f, p.baseline_hz, k);
        out << format_number(f) << ',' << format_number(k) << ',' << format_number(factor) << ','
            << format_number(round_to_tenth(factor)) << ',' << format_number(beamwidth_ratio(f, p.baseline_hz))
            << ',' << elements_per_side(p.aperture_m, f) << '\n';
      }
    }
  });

  json bands = json::array();
  for (const BandPlan& b : candidate_bands()) {
    bands.push_back({{"name", b.name},
                     {"regions", b.regions},
                     {"low_hz", b.low},
                     {"high_hz", b.high},
                     {"bandwidth_hz", b.bandwidth()}});
  }
  const PeakRateConfig& pr = p.peak_rate;
  staging.write_json(prefix + "_summary.json",
                     {{"baseline_hz", p.baseline_hz},
                      {"aperture_m", p.aperture_m},
                      {"baseline_elements_per_side", elements_per_side(p.aperture_m, p.baseline_hz)},
                      {"bands", bands},
                      {"peak_rate_bps", peak_rate(pr.bits_per_symbol, pr.streams, pr.bandwidth_hz)},
                      {"required_spectral_efficiency_bps_per_hz",
                       required_spectral_efficiency(pr.target_rate_bps, pr.bandwidth_hz)}});
}

void run_beamfocus(const BeamfocusParams& p, const std::string& prefix, unsigned threads, Staging& staging) {
  const Point3 focus(p.focus_m[0], p.focus_m[1], p.focus_m[2]);
  const std::vector<double> xs = linear_axis(p.grid.x_min_m, p.grid.x_max_m, p.grid.step_m);
  const std::vector<double> ys = linear_axis(p.grid.y_min_m, p.grid.y_max_m, p.grid.step_m);

  json summary = {{"frequency_hz", p.frequency_hz}, {"focus_m", p.focus_m}, {"arrays", json::object()}};
  for (const auto& [name, config] : p.arrays) {
    const ArrayGeometry geometry = build_geometry(config, p.frequency_hz);
    const SpatialGrid grid = beampattern(geometry, focus, xs, ys, threads);
    staging.write(prefix + "_" + name + ".csv", [&](std::ostream& out) { write_grid_csv(out, grid); });

    const DepthOfFocus dof = depth_of_focus(grid, focus);
    const auto length = dof.length();
    summary["arrays"][name] = {{"elements", geometry.element_count()},
                               {"subarrays", geometry.subarray_count()},
                               {"aperture_m", geometry.aperture()},
                               {"fraunhofer_distance_m", fraunhofer_distance(geometry)},
                               {"near_edge_m", dof.near_edge},
                               {"far_edge_m", dof.far_edge},
                               {"unbounded", dof.unbounded},
                               {"depth_of_focus_m", length ? json(*length) : json(nullptr)}};
  }
  staging.write_json(prefix + "_depth_of_focus.json", summary);
}

void run_music(const MusicParams& p, const std::string& prefix, unsigned threads, Staging& staging) {
  const ArrayGeometry geometry = build_geometry(p.array, p.frequency_hz);
  std::vector<PolarPosition> truth;
  std::vector<double> powers;
  for (const SourceConfig& s : p.sources) {
    truth.push_back({s.azimuth_deg * kDegree, s.range_m});
    powers.push_back(s.power);
  }
  const double noise_variance = 1.0 / from_db(p.snr_db);
  const SnapshotSet snapshots = generate_snapshots(geometry, truth, powers, noise_variance, p.snapshots, p.seed);

  std::vector<double> azimuths =
      linear_axis(p.grid.azimuth_min_deg, p.grid.azimuth_max_deg, p.grid.azimuth_step_deg);
  for (double& a : azimuths) a *= kDegree;
  const std::vector<double> ranges = linear_axis(p.grid.range_min_m, p.grid.range_max_m, p.grid.range_step_m);

  MusicOptions options;
  options.detector = {p.peak_threshold, static_cast<std::size_t>(p.peak_min_separation)};
  options.threads = threads;
  const int order = p.model_order.value_or(static_cast<int>(p.sources.size()));
  const MusicResult result =
      music_spectrum(sample_covariance(snapshots.snapshots), geometry, order, azimuths, ranges, options);

  staging.write(prefix + "_spectrum.csv", [&](std::ostream& out) { write_spectrum_csv(out, result.spectrum); });

  json peaks = json::array();
  for (const SpectrumPeak& peak : result.peaks) {
    peaks.push_back({{"azimuth_deg", peak.position.azimuth / kDegree},
                     {"range_m", peak.position.range},
                     {"value", peak.value}});
  }
  json sources = json::array();
  for (const SourceConfig& s : p.sources) sources.push_back({{"azimuth_deg", s.azimuth_deg}, {"range_m", s.range_m}});
  const ResolveTolerance tolerance{p.tolerance_azimuth_deg * kDegree, p.tolerance_range_m};
  staging.write_json(prefix + "_peaks.json",
                     {{"model_order", order},
                      {"elements", geometry.element_count()},
                      {"fraunhofer_distance_m", fraunhofer_distance(geometry)},
                      {"peaks", peaks},
                      {"sources", sources},
                      {"tolerance", {{"azimuth_deg", p.tolerance_azimuth_deg}, {"range_m", p.tolerance_range_m}}},
                      {"resolved", resolve_check(result, truth, tolerance)}});
}

void run_capacity(const CapacityParams& p, const std::string& prefix, unsigned threads, Staging& staging) {
  CapacityScenario scenario{build_geometry(p.bs, p.frequency_hz), build_geometry(p.ue, p.frequency_hz), 4, 20.0,
                            500.0, kPi / 3.0, ChannelModel{}};
  scenario.users = p.users;
  scenario.min_range = p.min_range_m;
  scenario.max_range = p.max_range_m;
  scenario.max_azimuth = p.max_azimuth_deg * kDegree;
  scenario.model.cluster_count = p.channel.clusters;
  scenario.model.rician_k_db = p.channel.rician_k_db;
  scenario.model.cross_polar_ratio_db = p.channel.cross_polar_ratio_db;
  scenario.model.bandwidth = p.channel.bandwidth_hz;
  scenario.model.noise_figure_db = p.channel.noise_figure_db;
  scenario.model.tx_power_per_hz = p.channel.tx_power_w_per_hz;
  scenario.model.include_path_loss = p.channel.path_loss;

  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(p.drops));
  for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = p.seed + i;
  const std::vector<DropResult> drops = simulate_drops(scenario, seeds, threads);

  std::vector<double> rates;
  std::vector<double> streams;
  json per_drop = json::array();
  for (const DropResult& d : drops) {
    rates.insert(rates.end(), d.user_rates.begin(), d.user_rates.end());
    for (int s : d.user_streams) streams.push_back(s);
    per_drop.push_back({{"seed", d.seed}, {"per_user_rate_bps", d.user_rates}, {"per_user_streams", d.user_streams}});
  }

  staging.write(prefix + "_rate_cdf.csv", [&](std::ostream& out) { write_cdf_csv(out, empirical_cdf(rates)); });
  staging.write(prefix + "_streams_cdf.csv",
                [&](std::ostream& out) { write_cdf_csv(out, empirical_cdf(streams), "streams"); });
  staging.write_json(prefix + "_drops.json", per_drop);

  const auto mean = [](const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  };
  staging.write_json(prefix + "_summary.json", {{"frequency_hz", p.frequency_hz},
                                                {"bandwidth_hz", p.channel.bandwidth_hz},
                                                {"bs_ports", scenario.bs.port_count()},
                                                {"ue_ports", scenario.ue.port_count()},
                                                {"users", p.users},
                                                {"drops", p.drops},
                                                {"median_rate_bps", median(rates)},
                                                {"mean_rate_bps", mean(rates)},
                                                {"median_streams", median(streams)},
                                                {"mean_streams", mean(streams)}});
}

void run_linkbudget(const LinkBudgetParams& p, const std::string& prefix, Staging& staging) {
  staging.write(prefix + "_linkbudget.csv", [&](std::ostream& out) {
    out << "frequency_hz,distance_m,bandwidth_hz,received_power_w,received_power_dbm,noise_power_w,snr_db\n";
    for (double f : p.frequencies_hz) {
      for (double d : p.distances_m) {
        const double received = friis_received_power(p.tx_power_w, p.tx_area_m2, p.rx_area_m2, d, wavelength(f));
        for (double b : p.bandwidths_hz) {
          const LinkBudget link{p.tx_power_w, b, p.noise_figure_db};
          out << format_number(f) << ',' << format_number(d) << ',' << format_number(b) << ','
              << format_number(received) << ',' << format_number(to_db(received) + 30.0) << ','
              << format_number(link.noise_power()) << ',' << format_number(to_db(snr(link, received))) << '\n';
        }
      }
    }
  });
}

json error_body(const std::string& kind, const std::string& module, const std::string& message,
                const std::vector<std::string>& problems = {}) {
  json body = {{"status", "error"}, {"kind", kind}, {"module", module}, {"message", message}};
  if (!problems.empty()) body["problems"] = problems;
  return body;
}

void write_manifest(const fs::path& path, const json& manifest) {
  std::ofstream out(path, std::ios::binary);
  out << manifest.dump(2) << '\n';
  if (!out) throw IoError("cannot write manifest " + path.string());
}

}  // namespace

RunResult run(const ScenarioConfig& config, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  RunResult result;
  json error;
  try {
    std::error_code ec;
    fs::create_directories(options.out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + options.out_dir.string() + ": " + ec.message());

    Staging staging(options.out_dir, config.output_prefix);
    const unsigned threads = std::max(1u, options.threads);
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, ScaleParams>) {
            run_scale(p, config.output_prefix, staging);
          } else if constexpr (std::is_same_v<T, BeamfocusParams>) {
            run_beamfocus(p, config.output_prefix, threads, staging);
          } else if constexpr (std::is_same_v<T, MusicParams>) {
            run_music(p, config.output_prefix, threads, staging);
          } else if constexpr (std::is_same_v<T, CapacityParams>) {
            run_capacity(p, config.output_prefix, threads, staging);
          } else {
            run_linkbudget(p, config.output_prefix, staging);
          }
        },
        config.params);
    result.outputs = staging.commit();
  } catch (const ValidationError& e) {
    result.exit_code = kExitConfigError;
    error = error_body("config", e.module(), e.what());
  } catch (const Error& e) {
    result.exit_code = kExitNumericalError;
    error = error_body("numerical", e.module(), e.what());
  } catch (const IoError& e) {
    result.exit_code = kExitIoError;
    error = error_body("io", "cli", e.what());
  } catch (const fs::filesystem_error& e) {
    result.exit_code = kExitIoError;
    error = error_body("io", "cli", e.what());
  } catch (const std::exception& e) {
    result.exit_code = kExitNumericalError;
    error = error_body("numerical", "unknown", e.what());
  }
  if (result.exit_code != kExitSuccess) {
    // Files committed before a failed move are removed so nothing partial remains.
    for (const std::string& name : result.outputs) {
      std::error_code ec;
      fs::remove(options.out_dir / name, ec);
    }
    result.outputs.clear();
  }

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json manifest = {{"experiment", config.experiment()},
                   {"toolkit_version", kVersion},
                   {"config", json::parse(serialize(config))},
                   {"threads", options.threads},
                   {"wall_time_s", wall},
                   {"status", result.exit_code == kExitSuccess ? "ok" : "error"},
                   {"outputs", result.outputs}};
  if (!error.is_null()) manifest["error"] = error;
  const std::string manifest_name = config.output_prefix + "_manifest.json";
  try {
    write_manifest(options.out_dir / manifest_name, manifest);
    result.outputs.push_back(manifest_name);
  } catch (const IoError& e) {
    if (result.exit_code == kExitSuccess) {
      result.exit_code = kExitIoError;
      error = error_body("io", "cli", e.what());
    }
  }
  if (!error.is_null()) result.error_json = error.dump();
  return result;
}

int run_from_file(const std::string& experiment, const fs::path& config_path, const RunOptions& options,
                  std::ostream& err) {
  const auto fail = [&](int code, const json& body) {
    err << body.dump() << '\n';
    // Runs that never reach a valid config still leave a manifest behind.
    std::error_code ec;
    fs::create_directories(options.out_dir, ec);
    const json manifest = {{"experiment", experiment},  {"toolkit_version", kVersion},
                           {"config", nullptr},          {"config_path", config_path.string()},
                           {"wall_time_s", 0.0},        {"status", "error"},
                           {"outputs", json::array()},  {"error", body}};
    try {
      write_manifest(options.out_dir / (experiment + "_manifest.json"), manifest);
    } catch (const IoError&) {
    }
    return code;
  };

  std::ifstream in(config_path, std::ios::binary);
  if (!in) return fail(kExitIoError, error_body("io", "cli", "cannot read config " + config_path.string()));
  std::ostringstream text;
  text << in.rdbuf();

  ScenarioConfig config;
  try {
    config = parse_config(text.str());
  } catch (const ConfigError& e) {
    return fail(kExitConfigError, error_body("config", "cli", "invalid config " + config_path.string(), e.problems()));
  }
  if (config.experiment() != experiment) {
    return fail(kExitConfigError, error_body("config", "cli",
                                             "config declares experiment '" + config.experiment() +
                                                 "' but '" + experiment + "' was requested"));
  }

  const RunResult result = run(config, options);
  if (!result.error_json.empty()) err << result.error_json << '\n';
  return result.exit_code;
}

}  // namespace gmimo::cli
