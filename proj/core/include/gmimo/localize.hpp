#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "gmimo/geometry.hpp"
#include "gmimo/numerics.hpp"
#include "gmimo/wavefield.hpp"

namespace gmimo {

struct SnapshotSet {
  ComplexMatrix snapshots;  // N elements x T snapshots
  double noise_variance = 0.0;
  std::uint64_t seed = 0;
};

// Narrowband snapshots x(t) = sum_k s_k(t) a(source_k) + n(t), with s_k(t)
// CN(0, power_k), n(t) CN(0, noise_variance I) and a() the spherical-wave
// response. Sources are placed relative to the geometry centroid.
// Bit-identical output for identical arguments.
SnapshotSet generate_snapshots(const ArrayGeometry& geometry, const std::vector<PolarPosition>& sources,
                               const std::vector<double>& source_powers, double noise_variance, int snapshot_count,
                               std::uint64_t seed);

// (1/T) X X^H. An empty snapshot matrix (T = 0) yields the zero matrix.
ComplexMatrix sample_covariance(const ComplexMatrix& snapshots);

// Pseudo-spectrum sampled on an (azimuth, range) grid.
// value(ia, ir) = values[ia * n_range + ir].
struct SpatialSpectrum {
  std::vector<double> azimuth_axis;  // rad
  std::vector<double> range_axis;    // m
  std::vector<double> values;

  std::size_t n_azimuth() const noexcept { return azimuth_axis.size(); }
  std::size_t n_range() const noexcept { return range_axis.size(); }
  double value(std::size_t ia, std::size_t ir) const { return values[ia * n_range() + ir]; }
};

struct SpectrumPeak {
  PolarPosition position;
  double value = 0.0;
  std::size_t azimuth_index = 0;
  std::size_t range_index = 0;
};

struct MusicResult {
  SpatialSpectrum spectrum;  // normalized to max 1
  std::vector<SpectrumPeak> peaks;
  int model_order = 0;
};

struct PeakDetector {
  double threshold = 0.3;      // fraction of the global maximum
  std::size_t min_separation = 2;  // Chebyshev distance in grid cells between accepted peaks
};

struct MusicOptions {
  PeakDetector detector;
  unsigned threads = 1;
};

// MUSIC over an (azimuth, range) grid: with E_n the eigenvectors of the
// N - K smallest eigenvalues of `covariance`, value = 1 / ||E_n^H a(theta, r)||^2,
// normalized to a maximum of 1. Grid points are taken relative to the
// geometry centroid. Throws ValidationError when K >= N or K < 1 and when the
// covariance is not PSD (smallest eigenvalue < -1e-8 trace).
MusicResult music_spectrum(const ComplexMatrix& covariance, const ArrayGeometry& geometry, int model_order,
                           const std::vector<double>& azimuth_axis, const std::vector<double>& range_axis,
                           const MusicOptions& options = {});

// Up to max_peaks 8-neighbour local maxima with value >= threshold * global max,
// taken largest first and rejecting candidates within min_separation cells of
// an accepted peak.
std::vector<SpectrumPeak> detect_peaks(const SpatialSpectrum& spectrum, std::size_t max_peaks,
                                       const PeakDetector& detector = {});

struct ResolveTolerance {
  double azimuth = 0.0;  // rad
  double range = 0.0;    // m
};

// True iff every truth position can be paired with a distinct detected peak
// within the tolerances (bipartite matching).
bool resolve_check(const MusicResult& result, const std::vector<PolarPosition>& truth,
                   const ResolveTolerance& tolerance);

// "azimuth_deg,range_m,value" triples, azimuth-major.
void write_spectrum_csv(std::ostream& out, const SpatialSpectrum& spectrum);

}  // namespace gmimo
