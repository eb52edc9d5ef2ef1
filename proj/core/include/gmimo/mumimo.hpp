#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "gmimo/geometry.hpp"
#include "gmimo/numerics.hpp"

namespace gmimo {

// Parameters of the geometric Rician cluster channel.
struct ChannelModel {
  int cluster_count = 6;
  double rician_k_db = 10.0;
  // Co- to cross-polarized power ratio of scattered paths (dual-polarized arrays only).
  double cross_polar_ratio_db = 10.0;
  double bandwidth = 100e6;            // Hz
  double noise_figure_db = 9.0;        // dB
  double tx_power_per_hz = 1e-6;       // W/Hz (1 W per MHz)
  bool include_path_loss = true;
};

// Downlink channels of one drop. channels[k] is (UE k ports) x (BS ports).
// Each matrix is normalized so E||H_k||_F^2 = ports product; the large-scale
// power gain of user k is carried separately in path_gain[k].
struct ChannelSet {
  std::vector<ComplexMatrix> channels;
  std::vector<double> path_gain;
  double carrier_frequency = 0.0;  // Hz
  double bandwidth = 0.0;          // Hz
  double noise_power = 0.0;        // W
  double tx_power = 0.0;           // W
  std::uint64_t seed = 0;

  std::size_t user_count() const noexcept { return channels.size(); }
  Eigen::Index bs_ports() const { return channels.empty() ? 0 : channels.front().cols(); }
};

// H_k = sqrt(kappa/(kappa+1)) H_LOS + sqrt(1/(kappa+1)) H_NLOS.
//
// H_LOS uses exact spherical-wave phases between every BS/UE element pair
// (co-polarized only for dual-polarized arrays). H_NLOS sums cluster_count
// plane-wave clusters a_rx(theta_rx) a_tx(theta_tx)^H with CN(0, 1/C) gains,
// departure angles uniform in (-pi/2, pi/2) and arrival angles uniform in
// [-pi, pi). Plane-wave phases are referenced to each array's centroid.
//
// `ue_geometries` are given in local coordinates and translated to
// `ue_positions`. Random draws per user do not depend on array sizes, so
// enlarging an array around the same centroid appends channel entries
// without changing existing ones. Path gain is (lambda / (4 pi d))^2 between
// centroids (isotropic elements), or 1 when path loss is disabled.
ChannelSet generate_channels(const ArrayGeometry& bs, const std::vector<ArrayGeometry>& ue_geometries,
                             const std::vector<Point3>& ue_positions, const ChannelModel& model, std::uint64_t seed);

struct UserSubspace {
  ComplexMatrix null_basis;         // BS ports x d_k, orthonormal; null space of the other users' stacked channels
  ComplexMatrix effective_channel;  // H_k * null_basis
  ComplexMatrix precoder;           // null_basis * V_k: BS ports x streams, orthonormal columns
  RealVector singular_values;       // of the effective channel, one per precoder column
};

// Block diagonalization. Streams whose singular value falls below the
// numerical-rank tolerance are dropped; an empty null space leaves the user
// with zero streams.
std::vector<UserSubspace> block_diagonalize(const ChannelSet& channels);

// Water-filling over parallel channels with power gains g_i:
// p_i = max(0, mu - noise/g_i), sum p_i = total_power.
// Throws ValidationError for empty or nonpositive gains or nonpositive power.
std::vector<double> waterfill(std::span<const double> gains, double noise_power, double total_power);

// Water level mu implied by an allocation (mean of p_i + noise/g_i over active streams).
double water_level(std::span<const double> gains, std::span<const double> powers, double noise_power);

struct PrecodingSolution {
  std::vector<ComplexMatrix> precoders;            // per user, orthonormal columns before power loading
  std::vector<std::vector<double>> stream_gains;   // path_gain * sigma^2 per stream
  std::vector<std::vector<double>> stream_powers;  // W
  std::vector<double> user_rates;                  // bit/s
  std::vector<int> active_streams;

  double sum_rate() const;
  double total_power() const;
};

// Block diagonalization followed by one water-filling pass over all users'
// streams under the total transmit power.
PrecodingSolution evaluate(const ChannelSet& channels);

// ||H_j W_k||_F / (||H_j||_F ||W_k||_F), maximized over j != k.
double max_leakage(const ChannelSet& channels, const PrecodingSolution& solution);

struct CdfPoint {
  double value = 0.0;
  double fraction = 0.0;
};

// Empirical CDF: one point per distinct sample value, fraction = share of
// samples <= value. Ends at 1.
std::vector<CdfPoint> empirical_cdf(std::vector<double> samples);

// Empirical CDF of the per-user rates pooled over all solutions.
std::vector<CdfPoint> rate_cdf(const std::vector<PrecodingSolution>& solutions);

// "<value_header>,cdf" then one row per point.
void write_cdf_csv(std::ostream& out, const std::vector<CdfPoint>& cdf, const char* value_header = "rate_bps");

// Monte Carlo drop layout: a BS array at the origin facing +y and identical
// UE arrays dropped uniformly by area in an annular sector.
struct CapacityScenario {
  ArrayGeometry bs;
  ArrayGeometry ue;  // local coordinates, centered on the origin
  int users = 4;
  double min_range = 20.0;   // m
  double max_range = 500.0;  // m
  double max_azimuth = kPi / 3.0;  // rad, UEs in (-max_azimuth, max_azimuth)
  ChannelModel model;
};

struct DropResult {
  std::uint64_t seed = 0;
  std::vector<double> user_rates;
  std::vector<int> user_streams;
};

ChannelSet generate_drop(const CapacityScenario& scenario, std::uint64_t seed);
DropResult simulate_drop(const CapacityScenario& scenario, std::uint64_t seed);

// Evaluates every seed; results are ordered like `seeds` regardless of threads.
std::vector<DropResult> simulate_drops(const CapacityScenario& scenario, const std::vector<std::uint64_t>& seeds,
                                       unsigned threads = 1);

double median(std::vector<double> values);

}  // namespace gmimo
