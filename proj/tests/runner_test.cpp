#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gmimo/runner.hpp"

namespace gmimo::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

class RunnerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    root_ = fs::temp_directory_path() / ("gmimo_runner_" + std::string(info->name()));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  fs::path write_config(const std::string& name, const std::string& text) {
    const fs::path path = root_ / name;
    std::ofstream(path) << text;
    return path;
  }

  static std::vector<std::string> listing(const fs::path& dir) {
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(dir)) names.push_back(e.path().filename().string());
    std::sort(names.begin(), names.end());
    return names;
  }

  fs::path root_;
};

const char* kSmallMusic = R"({
  "experiment": "music", "output_prefix": "m", "frequency_hz": 15e9,
  "array": {"type": "ula", "elements": 16},
  "sources": [{"azimuth_deg": -10, "range_m": 3}, {"azimuth_deg": 10, "range_m": 5}],
  "snapshots": 50, "seed": 9,
  "grid": {"azimuth_deg": [-30, 30], "azimuth_step_deg": 1, "range_m": [1, 8], "range_step_m": 0.25}
})";

const char* kSmallCapacity = R"({
  "experiment": "capacity", "output_prefix": "c", "frequency_hz": 15e9,
  "bs": {"type": "ula", "elements": 16, "ports_per_element": 2},
  "ue": {"type": "ula", "elements": 2, "ports_per_element": 2},
  "users": 3, "drops": 12, "seed": 40
})";

TEST_F(RunnerTest, ScaleTableMatchesScalingAnchors) {
  const fs::path cfg = fs::path(GMIMO_CONFIG_DIR) / "scale.json";
  std::ostringstream err;
  ASSERT_EQ(run_from_file("scale", cfg, {root_, 1}, err), kExitSuccess) << err.str();
  const std::string csv = slurp(root_ / "scale_scaling.csv");
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line,
            "carrier_hz,ue_antenna_multiplier,bs_antenna_factor,bs_antenna_factor_rounded,beamwidth_ratio,"
            "elements_per_side");
  std::vector<std::string> rounded;
  while (std::getline(lines, line)) {
    std::vector<std::string> cells;
    std::stringstream row(line);
    for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
    ASSERT_EQ(cells.size(), 6u);
    rounded.push_back(cells[3]);
  }
  EXPECT_EQ(rounded, (std::vector<std::string>{"5", "2.5", "1.2", "18.4", "9.2", "4.6"}));

  const json summary = json::parse(slurp(root_ / "scale_summary.json"));
  EXPECT_NEAR(summary["peak_rate_bps"].get<double>(), 230.4e9, 1e-3);
  EXPECT_NEAR(summary["required_spectral_efficiency_bps_per_hz"].get<double>(), 166.6667, 1e-3);
  EXPECT_EQ(summary["bands"].size(), 5u);
}

TEST_F(RunnerTest, ManifestEchoesConfigAndVersion) {
  std::ostringstream err;
  ASSERT_EQ(run_from_file("linkbudget", fs::path(GMIMO_CONFIG_DIR) / "linkbudget.json", {root_, 1}, err), 0);
  const json manifest = json::parse(slurp(root_ / "linkbudget_manifest.json"));
  EXPECT_EQ(manifest["status"], "ok");
  EXPECT_EQ(manifest["config"]["experiment"], "linkbudget");
  EXPECT_FALSE(manifest["toolkit_version"].get<std::string>().empty());
  EXPECT_GE(manifest["wall_time_s"].get<double>(), 0.0);
  EXPECT_EQ(manifest["outputs"], json::array({"linkbudget_linkbudget.csv"}));
  const std::string csv = slurp(root_ / "linkbudget_linkbudget.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "frequency_hz,distance_m,bandwidth_hz,received_power_w,received_power_dbm,noise_power_w,snr_db");
}

TEST_F(RunnerTest, StochasticRunsAreByteIdentical) {
  for (const char* text : {kSmallMusic, kSmallCapacity}) {
    const ScenarioConfig c = parse_config(text);
    const RunResult a = run(c, {root_ / "a", 1});
    const RunResult b = run(c, {root_ / "b", 1});
    const RunResult t = run(c, {root_ / "t", 3});
    ASSERT_EQ(a.exit_code, 0) << a.error_json;
    ASSERT_EQ(a.outputs, b.outputs);
    for (const std::string& name : a.outputs) {
      if (name.find("manifest") != std::string::npos) continue;
      EXPECT_EQ(slurp(root_ / "a" / name), slurp(root_ / "b" / name)) << name;
      EXPECT_EQ(slurp(root_ / "a" / name), slurp(root_ / "t" / name)) << name;
    }
  }
  EXPECT_EQ(listing(root_ / "a"), (std::vector<std::string>{"c_drops.json", "c_manifest.json", "c_rate_cdf.csv",
                                                            "c_streams_cdf.csv", "c_summary.json", "m_manifest.json",
                                                            "m_peaks.json", "m_spectrum.csv"}));
}

TEST_F(RunnerTest, CapacityArtifactsHaveUnitsAndPerDropRecords) {
  const RunResult r = run(parse_config(kSmallCapacity), {root_, 1});
  ASSERT_EQ(r.exit_code, 0) << r.error_json;
  EXPECT_EQ(slurp(root_ / "c_rate_cdf.csv").substr(0, 12), "rate_bps,cdf");
  EXPECT_EQ(slurp(root_ / "c_streams_cdf.csv").substr(0, 11), "streams,cdf");
  const json drops = json::parse(slurp(root_ / "c_drops.json"));
  ASSERT_EQ(drops.size(), 12u);
  EXPECT_EQ(drops[0]["seed"], 40);
  EXPECT_EQ(drops[11]["seed"], 51);
  EXPECT_EQ(drops[0]["per_user_rate_bps"].size(), 3u);
  EXPECT_EQ(drops[0]["per_user_streams"].size(), 3u);
}

TEST_F(RunnerTest, FailedRunLeavesOnlyTheManifest) {
  // Bypasses parse-time validation: the second array only fails when built.
  BeamfocusParams p;
  p.arrays["a_good"].elements = 8;
  GeometryConfig bad;
  bad.type = "distributed";
  bad.subarrays = {{24, {0, 0, 0}, {1, 0, 0}}, {24, {0.05, 0, 0}, {1, 0, 0}}};
  p.arrays["b_bad"] = bad;
  p.grid = {-1, 1, 0, 40, 0.5};
  const ScenarioConfig c{"broken", p};

  const RunResult r = run(c, {root_, 1});
  EXPECT_EQ(r.exit_code, kExitConfigError);
  EXPECT_EQ(listing(root_), (std::vector<std::string>{"broken_manifest.json"}));
  const json manifest = json::parse(slurp(root_ / "broken_manifest.json"));
  EXPECT_EQ(manifest["status"], "error");
  EXPECT_EQ(manifest["error"]["module"], "geometry");
  EXPECT_EQ(json::parse(r.error_json)["kind"], "config");
}

TEST_F(RunnerTest, InvalidConfigReportsJsonAndExitsTwo) {
  const fs::path cfg = write_config("bad.json", R"({"experiment": "music", "frequency_hz": -5})");
  std::ostringstream err;
  EXPECT_EQ(run_from_file("music", cfg, {root_ / "out", 1}, err), kExitConfigError);
  const json body = json::parse(err.str());
  EXPECT_EQ(body["kind"], "config");
  EXPECT_GE(body["problems"].size(), 3u);
  EXPECT_EQ(listing(root_ / "out"), (std::vector<std::string>{"music_manifest.json"}));

  std::ostringstream mismatch;
  EXPECT_EQ(run_from_file("capacity", fs::path(GMIMO_CONFIG_DIR) / "scale.json", {root_ / "out", 1}, mismatch),
            kExitConfigError);
}

TEST_F(RunnerTest, IoFailuresExitFour) {
  std::ostringstream err;
  EXPECT_EQ(run_from_file("scale", root_ / "missing.json", {root_, 1}, err), kExitIoError);
  std::ofstream(root_ / "blocker") << "file in the way";
  EXPECT_EQ(run(parse_config(R"({"experiment": "scale"})"), {root_ / "blocker" / "sub", 1}).exit_code, kExitIoError);
}

TEST_F(RunnerTest, BinaryRunsTheFocusingFixture) {
  const std::string cmd = std::string("\"") + GMIMO_BINARY + "\" beamfocus --config \"" + GMIMO_CONFIG_DIR +
                          "/fig5_beamfocus.json\" --out \"" + root_.string() + "\" --threads 2";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_TRUE(fs::exists(root_ / "fig5_single_ula.csv"));
  EXPECT_TRUE(fs::exists(root_ / "fig5_two_subarrays.csv"));
  const json dof = json::parse(slurp(root_ / "fig5_depth_of_focus.json"));
  EXPECT_TRUE(dof["arrays"]["single_ula"]["unbounded"].get<bool>());
  EXPECT_TRUE(dof["arrays"]["single_ula"]["depth_of_focus_m"].is_null());
  EXPECT_FALSE(dof["arrays"]["two_subarrays"]["unbounded"].get<bool>());
  EXPECT_GT(dof["arrays"]["two_subarrays"]["depth_of_focus_m"].get<double>(), 0.0);
  EXPECT_EQ(slurp(root_ / "fig5_single_ula.csv").substr(0, 12), "y_m\\x_m,-50,");
}

TEST_F(RunnerTest, BinaryRejectsBadArguments) {
  const std::string cmd = std::string("\"") + GMIMO_BINARY + "\" beamfocus --threads 2 > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), kExitConfigError);
}

}  // namespace
}  // namespace gmimo::cli
