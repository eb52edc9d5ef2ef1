#include "gmimo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gmimo/errors.hpp"

namespace gmimo {

namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ValidationError("geometry", std::string(what) + " must be positive and finite");
  }
}

}  // namespace

double wavelength(double carrier_frequency) {
  require_positive(carrier_frequency, "carrier frequency");
  return kSpeedOfLight / carrier_frequency;
}

ArrayGeometry::ArrayGeometry(std::vector<Point3> positions, double carrier_frequency, int ports_per_element,
                             std::vector<int> subarray_index)
    : positions_(std::move(positions)),
      carrier_frequency_(carrier_frequency),
      wavelength_(gmimo::wavelength(carrier_frequency)),
      ports_per_element_(ports_per_element),
      subarray_index_(std::move(subarray_index)) {
  if (positions_.empty()) {
    throw ValidationError("geometry", "array needs at least one element");
  }
  for (const Point3& p : positions_) {
    if (!p.allFinite()) throw ValidationError("geometry", "element position is not finite");
  }
  if (ports_per_element_ != 1 && ports_per_element_ != 2) {
    throw ValidationError("geometry", "ports_per_element must be 1 or 2");
  }
  if (subarray_index_.empty()) {
    subarray_index_.assign(positions_.size(), 0);
  } else if (subarray_index_.size() != positions_.size()) {
    throw ValidationError("geometry", "subarray_index length differs from element count");
  }

  const double min_spacing = kMinIntraSubarraySpacing * wavelength_;
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    for (std::size_t j = i + 1; j < positions_.size(); ++j) {
      if (subarray_index_[i] != subarray_index_[j]) continue;
      if ((positions_[i] - positions_[j]).norm() < min_spacing) {
        throw ValidationError("geometry", "elements " + std::to_string(i) + " and " + std::to_string(j) +
                                              " are closer than 0.45 wavelength");
      }
    }
  }
}

int ArrayGeometry::subarray_count() const noexcept {
  return static_cast<int>(std::set<int>(subarray_index_.begin(), subarray_index_.end()).size());
}

Point3 ArrayGeometry::centroid() const {
  Point3 sum = Point3::Zero();
  for (const Point3& p : positions_) sum += p;
  return sum / static_cast<double>(positions_.size());
}

double ArrayGeometry::aperture() const {
  double span = 0.0;
  for (std::size_t i = 0; i < positions_.size(); ++i) {
    for (std::size_t j = i + 1; j < positions_.size(); ++j) {
      span = std::max(span, (positions_[i] - positions_[j]).norm());
    }
  }
  return span + 0.5 * wavelength_;
}

ArrayGeometry ArrayGeometry::translated(const Point3& offset) const {
  std::vector<Point3> moved = positions_;
  for (Point3& p : moved) p += offset;
  return ArrayGeometry(std::move(moved), carrier_frequency_, ports_per_element_, subarray_index_);
}

ArrayGeometry build_ula(int n, double carrier_frequency, const Point3& center, const Point3& axis,
                        int ports_per_element) {
  if (n < 1) throw ValidationError("geometry", "ULA needs at least one element");
  const double axis_norm = axis.norm();
  if (!(axis_norm > 0.0) || !std::isfinite(axis_norm)) {
    throw ValidationError("geometry", "ULA axis must be a nonzero finite vector");
  }
  const Point3 direction = axis / axis_norm;
  const double spacing = 0.5 * wavelength(carrier_frequency);
  std::vector<Point3> positions;
  positions.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double offset = (static_cast<double>(i) - 0.5 * static_cast<double>(n - 1)) * spacing;
    positions.push_back(center + offset * direction);
  }
  return ArrayGeometry(std::move(positions), carrier_frequency, ports_per_element);
}

ArrayGeometry build_distributed(const std::vector<SubarraySpec>& subarrays, double carrier_frequency,
                                int ports_per_element) {
  if (subarrays.empty()) throw ValidationError("geometry", "distributed array needs at least one subarray");
  for (std::size_t i = 0; i < subarrays.size(); ++i) {
    for (std::size_t j = i + 1; j < subarrays.size(); ++j) {
      if ((subarrays[i].center - subarrays[j].center).norm() == 0.0) {
        throw ValidationError("geometry", "subarrays " + std::to_string(i) + " and " + std::to_string(j) +
                                              " share the same center");
      }
    }
  }

  std::vector<Point3> positions;
  std::vector<int> labels;
  for (std::size_t s = 0; s < subarrays.size(); ++s) {
    const ArrayGeometry part =
        build_ula(subarrays[s].elements, carrier_frequency, subarrays[s].center, subarrays[s].axis);
    positions.insert(positions.end(), part.positions().begin(), part.positions().end());
    labels.insert(labels.end(), part.element_count(), static_cast<int>(s));
  }

  // Tolerance absorbs rounding when subarrays abut at exactly lambda / 2.
  const double min_spacing = 0.5 * wavelength(carrier_frequency) * (1.0 - 1e-9);
  for (std::size_t i = 0; i < positions.size(); ++i) {
    for (std::size_t j = i + 1; j < positions.size(); ++j) {
      if (labels[i] == labels[j]) continue;
      if ((positions[i] - positions[j]).norm() < min_spacing) {
        throw ValidationError("geometry", "subarrays " + std::to_string(labels[i]) + " and " +
                                              std::to_string(labels[j]) + " overlap (element spacing below lambda/2)");
      }
    }
  }
  return ArrayGeometry(std::move(positions), carrier_frequency, ports_per_element, std::move(labels));
}

double fraunhofer_distance(const ArrayGeometry& geometry) {
  const double d = geometry.aperture();
  return 2.0 * d * d / geometry.wavelength();
}

int elements_per_side(double aperture_length, double carrier_frequency) {
  require_positive(aperture_length, "aperture length");
  const double half_wavelength = 0.5 * wavelength(carrier_frequency);
  // The relative guard keeps exact multiples of lambda/2 from rounding down.
  return static_cast<int>(std::floor(aperture_length / half_wavelength * (1.0 + 1e-12)));
}

double bs_antenna_scaling_factor(double carrier_frequency, double baseline_frequency, double ue_antenna_multiplier) {
  require_positive(carrier_frequency, "carrier frequency");
  require_positive(baseline_frequency, "baseline frequency");
  if (!(ue_antenna_multiplier >= 1.0) || !std::isfinite(ue_antenna_multiplier)) {
    throw ValidationError("geometry", "UE antenna multiplier must be >= 1");
  }
  const double ratio = carrier_frequency / baseline_frequency;
  return ratio * ratio / ue_antenna_multiplier;
}

double beamwidth_ratio(double carrier_frequency, double baseline_frequency) {
  require_positive(carrier_frequency, "carrier frequency");
  require_positive(baseline_frequency, "baseline frequency");
  return carrier_frequency / baseline_frequency;
}

double peak_rate(double bits_per_symbol, double dof, double bandwidth) {
  require_positive(bits_per_symbol, "bits per symbol");
  require_positive(dof, "degrees of freedom");
  require_positive(bandwidth, "bandwidth");
  return bits_per_symbol * dof * bandwidth;
}

double required_spectral_efficiency(double target_rate, double bandwidth) {
  require_positive(target_rate, "target rate");
  require_positive(bandwidth, "bandwidth");
  return target_rate / bandwidth;
}

const std::vector<BandPlan>& candidate_bands() {
  static const std::vector<BandPlan> bands = {
      {"3.3-3.8GHz", "5G mid-band (varies by region)", 3.3e9, 3.8e9},
      {"4.4-4.8GHz", "Regions 1 and 3", 4.4e9, 4.8e9},
      {"7.75-8.4GHz", "Region 1", 7.75e9, 8.4e9},
      {"7.125-8.4GHz", "Regions 2 and 3", 7.125e9, 8.4e9},
      {"14.8-15.35GHz", "All regions", 14.8e9, 15.35e9},
  };
  return bands;
}

const BandPlan& find_band(const std::string& name) {
  for (const BandPlan& band : candidate_bands()) {
    if (band.name == name) return band;
  }
  throw ValidationError("geometry", "unknown band '" + name + "'");
}

}  // namespace gmimo
