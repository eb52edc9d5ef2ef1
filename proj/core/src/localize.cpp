#include "gmimo/localize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <random>

#include "gmimo/csv.hpp"
#include "gmimo/errors.hpp"
#include "gmimo/parallel.hpp"

namespace gmimo {

SnapshotSet generate_snapshots(const ArrayGeometry& geometry, const std::vector<PolarPosition>& sources,
                               const std::vector<double>& source_powers, double noise_variance, int snapshot_count,
                               std::uint64_t seed) {
  if (sources.empty()) throw ValidationError("localize", "at least one source is required");
  if (source_powers.size() != sources.size()) {
    throw ValidationError("localize", "one power per source is required");
  }
  if (snapshot_count < 1) throw ValidationError("localize", "snapshot count must be >= 1");
  if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance)) {
    throw ValidationError("localize", "noise variance must be >= 0");
  }
  for (double p : source_powers) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw ValidationError("localize", "source powers must be >= 0");
  }

  const Point3 origin = geometry.centroid();
  const auto n = static_cast<Eigen::Index>(geometry.element_count());
  const auto k_count = static_cast<Eigen::Index>(sources.size());
  ComplexMatrix steering(n, k_count);
  for (Eigen::Index k = 0; k < k_count; ++k) {
    validate(sources[static_cast<std::size_t>(k)]);
    steering.col(k) = nearfield_steering(geometry, to_cartesian(sources[static_cast<std::size_t>(k)], origin));
  }

  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto draw = [&](double variance) {
    const double scale = std::sqrt(0.5 * variance);
    const double re = normal(engine);
    const double im = normal(engine);
    return Complex(scale * re, scale * im);
  };

  SnapshotSet out{ComplexMatrix(n, snapshot_count), noise_variance, seed};
  ComplexVector symbols(k_count);
  for (int t = 0; t < snapshot_count; ++t) {
    for (Eigen::Index k = 0; k < k_count; ++k) symbols(k) = draw(source_powers[static_cast<std::size_t>(k)]);
    out.snapshots.col(t) = steering * symbols;
    for (Eigen::Index m = 0; m < n; ++m) out.snapshots(m, t) += draw(noise_variance);
  }
  return out;
}

ComplexMatrix sample_covariance(const ComplexMatrix& snapshots) {
  const Eigen::Index n = snapshots.rows();
  if (snapshots.cols() == 0) return ComplexMatrix::Zero(n, n);
  ComplexMatrix r = snapshots * snapshots.adjoint() / static_cast<double>(snapshots.cols());
  // Exact Hermitian symmetry for downstream checks.
  return 0.5 * (r + r.adjoint());
}

MusicResult music_spectrum(const ComplexMatrix& covariance, const ArrayGeometry& geometry, int model_order,
                           const std::vector<double>& azimuth_axis, const std::vector<double>& range_axis,
                           const MusicOptions& options) {
  const auto n = static_cast<Eigen::Index>(geometry.element_count());
  if (covariance.rows() != n || covariance.cols() != n) {
    throw DimensionError("localize", "covariance size does not match the element count");
  }
  if (model_order < 1 || model_order >= n) {
    throw ValidationError("localize", "model order must satisfy 1 <= K < N (K=" + std::to_string(model_order) +
                                          ", N=" + std::to_string(n) + ")");
  }
  if (azimuth_axis.empty() || range_axis.empty()) {
    throw ValidationError("localize", "spectrum grid axes must be nonempty");
  }
  for (double r : range_axis) {
    if (!(r > 0.0)) throw ValidationError("localize", "range axis must be positive");
  }
  for (double az : azimuth_axis) {
    if (!(std::abs(az) < 0.5 * kPi)) throw ValidationError("localize", "azimuth axis must lie in (-pi/2, pi/2)");
  }

  const HermitianEigen eig = hermitian_eig(covariance);
  const double trace = covariance.trace().real();
  if (eig.eigenvalues(n - 1) < -1e-8 * std::abs(trace)) {
    throw ValidationError("localize", "covariance is not positive semidefinite");
  }
  const ComplexMatrix noise_basis_h = eig.eigenvectors.rightCols(n - model_order).adjoint();

  MusicResult result;
  result.model_order = model_order;
  SpatialSpectrum& spectrum = result.spectrum;
  spectrum.azimuth_axis = azimuth_axis;
  spectrum.range_axis = range_axis;
  spectrum.values.assign(azimuth_axis.size() * range_axis.size(), 0.0);

  const Point3 origin = geometry.centroid();
  const std::size_t n_range = range_axis.size();
  parallel_for(azimuth_axis.size(), options.threads, [&](std::size_t ia) {
    for (std::size_t ir = 0; ir < n_range; ++ir) {
      const PolarPosition p{azimuth_axis[ia], range_axis[ir]};
      const ComplexVector a = nearfield_steering(geometry, to_cartesian(p, origin));
      const double projection = (noise_basis_h * a).squaredNorm();
      spectrum.values[ia * n_range + ir] = 1.0 / std::max(projection, 1e-300);
    }
  });

  const double peak = *std::max_element(spectrum.values.begin(), spectrum.values.end());
  for (double& v : spectrum.values) v /= peak;

  result.peaks = detect_peaks(spectrum, static_cast<std::size_t>(model_order), options.detector);
  return result;
}

std::vector<SpectrumPeak> detect_peaks(const SpatialSpectrum& spectrum, std::size_t max_peaks,
                                       const PeakDetector& detector) {
  const std::size_t na = spectrum.n_azimuth();
  const std::size_t nr = spectrum.n_range();
  if (spectrum.values.size() != na * nr) {
    throw DimensionError("localize", "spectrum value count does not match its axes");
  }
  if (spectrum.values.empty() || max_peaks == 0) return {};

  const double global_max = *std::max_element(spectrum.values.begin(), spectrum.values.end());
  const double floor_value = detector.threshold * global_max;

  std::vector<SpectrumPeak> candidates;
  for (std::size_t ia = 0; ia < na; ++ia) {
    for (std::size_t ir = 0; ir < nr; ++ir) {
      const double v = spectrum.value(ia, ir);
      if (v < floor_value) continue;
      bool is_max = true;
      for (std::size_t da = (ia > 0 ? ia - 1 : ia); da <= std::min(ia + 1, na - 1) && is_max; ++da) {
        for (std::size_t dr = (ir > 0 ? ir - 1 : ir); dr <= std::min(ir + 1, nr - 1); ++dr) {
          if ((da != ia || dr != ir) && spectrum.value(da, dr) > v) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) {
        candidates.push_back({{spectrum.azimuth_axis[ia], spectrum.range_axis[ir]}, v, ia, ir});
      }
    }
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const SpectrumPeak& a, const SpectrumPeak& b) { return a.value > b.value; });

  const auto distance = [](std::size_t a, std::size_t b) { return a > b ? a - b : b - a; };
  std::vector<SpectrumPeak> accepted;
  for (const SpectrumPeak& c : candidates) {
    if (accepted.size() == max_peaks) break;
    const bool separated = std::all_of(accepted.begin(), accepted.end(), [&](const SpectrumPeak& p) {
      return std::max(distance(p.azimuth_index, c.azimuth_index), distance(p.range_index, c.range_index)) >=
             detector.min_separation;
    });
    if (separated) accepted.push_back(c);
  }
  return accepted;
}

bool resolve_check(const MusicResult& result, const std::vector<PolarPosition>& truth,
                   const ResolveTolerance& tolerance) {
  if (!(tolerance.azimuth > 0.0) || !(tolerance.range > 0.0)) {
    throw ValidationError("localize", "resolve tolerances must be positive");
  }
  const auto& peaks = result.peaks;
  if (truth.size() > peaks.size()) return false;

  // Slack absorbs representation error when a peak sits exactly at the tolerance.
  constexpr double kSlack = 1e-9;
  const auto compatible = [&](std::size_t t, std::size_t p) {
    return std::abs(truth[t].azimuth - peaks[p].position.azimuth) <= tolerance.azimuth + kSlack &&
           std::abs(truth[t].range - peaks[p].position.range) <= tolerance.range + kSlack;
  };

  // Kuhn's augmenting-path matching; sizes are tiny.
  std::vector<int> owner(peaks.size(), -1);
  for (std::size_t t = 0; t < truth.size(); ++t) {
    std::vector<bool> visited(peaks.size(), false);
    std::function<bool(std::size_t)> augment = [&](std::size_t u) {
      for (std::size_t p = 0; p < peaks.size(); ++p) {
        if (visited[p] || !compatible(u, p)) continue;
        visited[p] = true;
        if (owner[p] < 0 || augment(static_cast<std::size_t>(owner[p]))) {
          owner[p] = static_cast<int>(u);
          return true;
        }
      }
      return false;
    };
    if (!augment(t)) return false;
  }
  return true;
}

void write_spectrum_csv(std::ostream& out, const SpatialSpectrum& spectrum) {
  out << "azimuth_deg,range_m,value\n";
  for (std::size_t ia = 0; ia < spectrum.n_azimuth(); ++ia) {
    const std::string az = format_number(spectrum.azimuth_axis[ia] * 180.0 / kPi);
    for (std::size_t ir = 0; ir < spectrum.n_range(); ++ir) {
      out << az << ',' << format_number(spectrum.range_axis[ir]) << ',' << format_number(spectrum.value(ia, ir))
          << '\n';
    }
  }
}

}  // namespace gmimo
