#include "gmimo/mumimo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

#include "gmimo/csv.hpp"
#include "gmimo/errors.hpp"
#include "gmimo/parallel.hpp"
#include "gmimo/wavefield.hpp"

namespace gmimo {

namespace {

struct ClusterDraw {
  double departure = 0.0;
  double arrival = 0.0;
  Complex gain;
  Complex polarization[2][2];
};

Complex complex_normal(std::mt19937_64& engine, double variance) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scale = std::sqrt(0.5 * variance);
  const double re = normal(engine);
  const double im = normal(engine);
  return {scale * re, scale * im};
}

std::uint64_t mix_seed(std::uint64_t seed) {
  // splitmix64 finalizer; decorrelates the layout stream from the fading stream.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

ChannelSet generate_channels(const ArrayGeometry& bs, const std::vector<ArrayGeometry>& ue_geometries,
                             const std::vector<Point3>& ue_positions, const ChannelModel& model, std::uint64_t seed) {
  if (ue_geometries.empty()) throw ValidationError("mumimo", "at least one UE is required");
  if (ue_geometries.size() != ue_positions.size()) {
    throw ValidationError("mumimo", "one position per UE geometry is required");
  }
  if (model.cluster_count < 0) throw ValidationError("mumimo", "cluster count must be >= 0");
  if (!(model.bandwidth > 0.0) || !(model.tx_power_per_hz > 0.0)) {
    throw ValidationError("mumimo", "bandwidth and transmit power density must be positive");
  }
  for (const ArrayGeometry& ue : ue_geometries) {
    if (ue.carrier_frequency() != bs.carrier_frequency()) {
      throw ValidationError("mumimo", "UE and BS arrays must share the carrier frequency");
    }
  }

  const double lambda = bs.wavelength();
  const double k_wave = 2.0 * kPi / lambda;
  const double kappa = from_db(model.rician_k_db);
  const double los_weight = std::sqrt(kappa / (kappa + 1.0));
  const double nlos_weight = std::sqrt(1.0 / (kappa + 1.0));
  const double xpr = from_db(model.cross_polar_ratio_db);

  const int bs_pol = bs.ports_per_element();
  const auto bs_elements = static_cast<Eigen::Index>(bs.element_count());
  const Point3 bs_center = bs.centroid();

  ChannelSet out;
  out.carrier_frequency = bs.carrier_frequency();
  out.bandwidth = model.bandwidth;
  out.noise_power = noise_power(model.bandwidth, model.noise_figure_db);
  out.tx_power = model.tx_power_per_hz * model.bandwidth;
  out.seed = seed;

  std::mt19937_64 engine(seed);
  std::uniform_real_distribution<double> departure_angle(-0.5 * kPi, 0.5 * kPi);
  std::uniform_real_distribution<double> arrival_angle(-kPi, kPi);

  for (std::size_t user = 0; user < ue_geometries.size(); ++user) {
    const ArrayGeometry ue = ue_geometries[user].translated(ue_positions[user] - ue_geometries[user].centroid());
    const int ue_pol = ue.ports_per_element();
    const auto ue_elements = static_cast<Eigen::Index>(ue.element_count());
    const Point3 ue_center = ue.centroid();
    const double separation = (ue_center - bs_center).norm();
    if (!(separation > 0.0)) throw ValidationError("mumimo", "UE " + std::to_string(user) + " sits on the BS centroid");

    // Fixed draw count per user keeps the random stream independent of array sizes.
    std::vector<ClusterDraw> clusters(static_cast<std::size_t>(model.cluster_count));
    for (ClusterDraw& c : clusters) {
      c.departure = departure_angle(engine);
      c.arrival = arrival_angle(engine);
      c.gain = complex_normal(engine, 1.0 / static_cast<double>(model.cluster_count));
      for (auto& row : c.polarization) {
        for (Complex& entry : row) entry = complex_normal(engine, 1.0);
      }
    }

    const int co_polar = std::min(ue_pol, bs_pol);
    const int cross_polar = ue_pol * bs_pol - co_polar;
    const double port_product = static_cast<double>(ue_pol * bs_pol);
    const double los_scale = std::sqrt(port_product / co_polar);
    const double co_std = std::sqrt(port_product / (co_polar + cross_polar / xpr));
    const double cross_std = co_std / std::sqrt(xpr);

    ComplexMatrix h = ComplexMatrix::Zero(ue_elements * ue_pol, bs_elements * bs_pol);

    for (Eigen::Index n = 0; n < ue_elements; ++n) {
      for (Eigen::Index m = 0; m < bs_elements; ++m) {
        const double d = (ue.positions()[static_cast<std::size_t>(n)] - bs.positions()[static_cast<std::size_t>(m)]).norm();
        if (d == 0.0) throw ValidationError("mumimo", "UE element coincides with a BS element");
        const Complex los = los_scale * std::polar(1.0, -k_wave * (d - separation));
        for (int pol = 0; pol < co_polar; ++pol) {
          h(n * ue_pol + pol, m * bs_pol + pol) += los_weight * los;
        }
      }
    }

    for (const ClusterDraw& c : clusters) {
      const ComplexVector a_rx = farfield_steering(ue, c.arrival);
      const ComplexVector a_tx = farfield_steering(bs, c.departure);
      for (int q = 0; q < ue_pol; ++q) {
        for (int p = 0; p < bs_pol; ++p) {
          const Complex pol = c.polarization[q][p] * (q == p ? co_std : cross_std);
          const Complex coefficient = nlos_weight * c.gain * pol;
          for (Eigen::Index n = 0; n < ue_elements; ++n) {
            for (Eigen::Index m = 0; m < bs_elements; ++m) {
              h(n * ue_pol + q, m * bs_pol + p) += coefficient * a_rx(n) * std::conj(a_tx(m));
            }
          }
        }
      }
    }

    const double isotropic_area = lambda * lambda / (4.0 * kPi);
    out.path_gain.push_back(model.include_path_loss
                                ? friis_received_power(1.0, isotropic_area, isotropic_area, separation, lambda)
                                : 1.0);
    out.channels.push_back(std::move(h));
  }
  return out;
}

std::vector<UserSubspace> block_diagonalize(const ChannelSet& channels) {
  const std::size_t users = channels.user_count();
  if (users == 0) throw ValidationError("mumimo", "channel set is empty");
  const Eigen::Index bs_ports = channels.bs_ports();
  for (const ComplexMatrix& h : channels.channels) {
    if (h.cols() != bs_ports) throw DimensionError("mumimo", "users disagree on the BS port count");
  }

  std::vector<UserSubspace> out(users);
  for (std::size_t k = 0; k < users; ++k) {
    Eigen::Index other_rows = 0;
    for (std::size_t j = 0; j < users; ++j) {
      if (j != k) other_rows += channels.channels[j].rows();
    }
    ComplexMatrix stacked(other_rows, bs_ports);
    Eigen::Index row = 0;
    for (std::size_t j = 0; j < users; ++j) {
      if (j == k) continue;
      stacked.middleRows(row, channels.channels[j].rows()) = channels.channels[j];
      row += channels.channels[j].rows();
    }

    UserSubspace& s = out[k];
    s.null_basis = null_space(stacked);
    s.effective_channel = channels.channels[k] * s.null_basis;
    if (s.null_basis.cols() == 0 || s.effective_channel.rows() == 0) {
      s.precoder = ComplexMatrix(bs_ports, 0);
      s.singular_values = RealVector(0);
      continue;
    }
    const SingularValueDecomposition d = svd(s.effective_channel, SvdMode::kThin);
    const Eigen::Index rank = numerical_rank(d.singular_values, default_rank_tolerance(s.effective_channel));
    s.singular_values = d.singular_values.head(rank);
    s.precoder = s.null_basis * d.v.leftCols(rank);
  }
  return out;
}

std::vector<double> waterfill(std::span<const double> gains, double noise_power, double total_power) {
  if (gains.empty()) throw ValidationError("mumimo", "water-filling needs at least one stream");
  if (!(noise_power > 0.0) || !std::isfinite(noise_power)) {
    throw ValidationError("mumimo", "noise power must be positive");
  }
  if (!(total_power > 0.0) || !std::isfinite(total_power)) {
    throw ValidationError("mumimo", "total power must be positive");
  }
  std::vector<double> floors(gains.size());
  for (std::size_t i = 0; i < gains.size(); ++i) {
    if (!(gains[i] > 0.0) || !std::isfinite(gains[i])) {
      throw ValidationError("mumimo", "stream gains must be positive");
    }
    floors[i] = noise_power / gains[i];
  }

  std::vector<std::size_t> order(gains.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return floors[a] < floors[b]; });

  // Largest active set whose water level clears the weakest member's floor.
  std::size_t active = order.size();
  double level = 0.0;
  for (; active >= 1; --active) {
    double floor_sum = 0.0;
    for (std::size_t i = 0; i < active; ++i) floor_sum += floors[order[i]];
    level = (total_power + floor_sum) / static_cast<double>(active);
    if (level > floors[order[active - 1]]) break;
  }

  std::vector<double> powers(gains.size(), 0.0);
  for (std::size_t i = 0; i < active; ++i) powers[order[i]] = level - floors[order[i]];
  return powers;
}

double water_level(std::span<const double> gains, std::span<const double> powers, double noise_power) {
  if (gains.size() != powers.size()) throw DimensionError("mumimo", "gain and power counts differ");
  double sum = 0.0;
  std::size_t active = 0;
  for (std::size_t i = 0; i < gains.size(); ++i) {
    if (powers[i] > 0.0) {
      sum += powers[i] + noise_power / gains[i];
      ++active;
    }
  }
  return active == 0 ? 0.0 : sum / static_cast<double>(active);
}

double PrecodingSolution::sum_rate() const { return std::accumulate(user_rates.begin(), user_rates.end(), 0.0); }

double PrecodingSolution::total_power() const {
  double total = 0.0;
  for (const auto& user : stream_powers) total = std::accumulate(user.begin(), user.end(), total);
  return total;
}

PrecodingSolution evaluate(const ChannelSet& channels) {
  const std::vector<UserSubspace> subspaces = block_diagonalize(channels);
  const std::size_t users = subspaces.size();
  if (channels.path_gain.size() != users) throw DimensionError("mumimo", "one path gain per user is required");

  PrecodingSolution out;
  out.precoders.resize(users);
  out.stream_gains.resize(users);
  out.stream_powers.resize(users);
  out.user_rates.assign(users, 0.0);
  out.active_streams.assign(users, 0);

  std::vector<double> pooled;
  for (std::size_t k = 0; k < users; ++k) {
    out.precoders[k] = subspaces[k].precoder;
    for (Eigen::Index i = 0; i < subspaces[k].singular_values.size(); ++i) {
      const double sigma = subspaces[k].singular_values(i);
      out.stream_gains[k].push_back(channels.path_gain[k] * sigma * sigma);
    }
    pooled.insert(pooled.end(), out.stream_gains[k].begin(), out.stream_gains[k].end());
  }
  if (pooled.empty()) return out;

  const std::vector<double> powers = waterfill(pooled, channels.noise_power, channels.tx_power);
  std::size_t cursor = 0;
  for (std::size_t k = 0; k < users; ++k) {
    double spectral_efficiency = 0.0;
    for (double gain : out.stream_gains[k]) {
      const double p = powers[cursor++];
      out.stream_powers[k].push_back(p);
      if (p > 0.0) {
        ++out.active_streams[k];
        spectral_efficiency += std::log2(1.0 + p * gain / channels.noise_power);
      }
    }
    out.user_rates[k] = channels.bandwidth * spectral_efficiency;
  }
  return out;
}

double max_leakage(const ChannelSet& channels, const PrecodingSolution& solution) {
  double worst = 0.0;
  for (std::size_t j = 0; j < channels.user_count(); ++j) {
    for (std::size_t k = 0; k < solution.precoders.size(); ++k) {
      if (j == k || solution.precoders[k].cols() == 0) continue;
      const double denominator = channels.channels[j].norm() * solution.precoders[k].norm();
      if (denominator == 0.0) continue;
      worst = std::max(worst, (channels.channels[j] * solution.precoders[k]).norm() / denominator);
    }
  }
  return worst;
}

std::vector<CdfPoint> empirical_cdf(std::vector<double> samples) {
  if (samples.empty()) throw ValidationError("mumimo", "CDF needs at least one sample");
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  std::vector<CdfPoint> out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i + 1 < samples.size() && samples[i + 1] == samples[i]) continue;
    out.push_back({samples[i], static_cast<double>(i + 1) / n});
  }
  return out;
}

std::vector<CdfPoint> rate_cdf(const std::vector<PrecodingSolution>& solutions) {
  std::vector<double> samples;
  for (const PrecodingSolution& s : solutions) samples.insert(samples.end(), s.user_rates.begin(), s.user_rates.end());
  return empirical_cdf(std::move(samples));
}

void write_cdf_csv(std::ostream& out, const std::vector<CdfPoint>& cdf, const char* value_header) {
  out << value_header << ",cdf\n";
  for (const CdfPoint& p : cdf) out << format_number(p.value) << ',' << format_number(p.fraction) << '\n';
}

ChannelSet generate_drop(const CapacityScenario& scenario, std::uint64_t seed) {
  if (scenario.users < 1) throw ValidationError("mumimo", "scenario needs at least one user");
  if (!(scenario.min_range > 0.0) || !(scenario.max_range >= scenario.min_range)) {
    throw ValidationError("mumimo", "drop ranges must satisfy 0 < min <= max");
  }
  std::mt19937_64 layout(mix_seed(seed));
  std::uniform_real_distribution<double> area(scenario.min_range * scenario.min_range,
                                              scenario.max_range * scenario.max_range);
  std::uniform_real_distribution<double> bearing(-scenario.max_azimuth, scenario.max_azimuth);

  const Point3 bs_center = scenario.bs.centroid();
  std::vector<Point3> positions;
  for (int u = 0; u < scenario.users; ++u) {
    const double r = std::sqrt(area(layout));
    const double az = bearing(layout);
    positions.push_back(bs_center + Point3(r * std::sin(az), r * std::cos(az), 0.0));
  }
  const std::vector<ArrayGeometry> ues(static_cast<std::size_t>(scenario.users), scenario.ue);
  return generate_channels(scenario.bs, ues, positions, scenario.model, seed);
}

DropResult simulate_drop(const CapacityScenario& scenario, std::uint64_t seed) {
  const PrecodingSolution solution = evaluate(generate_drop(scenario, seed));
  return {seed, solution.user_rates, solution.active_streams};
}

std::vector<DropResult> simulate_drops(const CapacityScenario& scenario, const std::vector<std::uint64_t>& seeds,
                                       unsigned threads) {
  std::vector<DropResult> out(seeds.size());
  parallel_for(seeds.size(), threads, [&](std::size_t i) { out[i] = simulate_drop(scenario, seeds[i]); });
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) throw ValidationError("mumimo", "median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace gmimo
