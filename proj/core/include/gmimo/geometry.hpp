#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace gmimo {

inline constexpr double kSpeedOfLight = 2.9979e8;  // m/s
inline constexpr double kPi = 3.14159265358979323846;

using Point3 = Eigen::Vector3d;

// lambda = c / f. Throws ValidationError for nonpositive or non-finite f.
double wavelength(double carrier_frequency);

// Minimum spacing between two elements of the same subarray, in wavelengths.
inline constexpr double kMinIntraSubarraySpacing = 0.45;

// Element positions plus carrier frequency. Positions are in meters in a
// right-handed frame whose azimuth plane is z = 0; broadside is +y.
//
// Dual polarization is represented by ports_per_element = 2 with a single
// position per element, so geometric quantities never see polarization.
class ArrayGeometry {
 public:
  // Validates: at least one element, finite positions, f > 0,
  // ports_per_element in {1, 2}, and intra-subarray spacing >= 0.45 lambda.
  // An empty subarray_index labels every element 0.
  ArrayGeometry(std::vector<Point3> positions, double carrier_frequency, int ports_per_element = 1,
                std::vector<int> subarray_index = {});

  const std::vector<Point3>& positions() const noexcept { return positions_; }
  const std::vector<int>& subarray_index() const noexcept { return subarray_index_; }
  double carrier_frequency() const noexcept { return carrier_frequency_; }
  double wavelength() const noexcept { return wavelength_; }
  int ports_per_element() const noexcept { return ports_per_element_; }

  std::size_t element_count() const noexcept { return positions_.size(); }
  std::size_t port_count() const noexcept { return positions_.size() * static_cast<std::size_t>(ports_per_element_); }
  int subarray_count() const noexcept;

  Point3 centroid() const;

  // Global aperture: largest pairwise element distance plus one element
  // footprint (lambda / 2). A ULA of n elements therefore spans n * lambda / 2.
  double aperture() const;

  ArrayGeometry translated(const Point3& offset) const;

 private:
  std::vector<Point3> positions_;
  double carrier_frequency_;
  double wavelength_;
  int ports_per_element_;
  std::vector<int> subarray_index_;
};

// n elements spaced lambda/2 along `axis`, centered on `center`.
ArrayGeometry build_ula(int n, double carrier_frequency, const Point3& center = Point3::Zero(),
                        const Point3& axis = Point3::UnitX(), int ports_per_element = 1);

struct SubarraySpec {
  int elements = 1;
  Point3 center = Point3::Zero();
  Point3 axis = Point3::UnitX();
};

// Concatenates one ULA per spec, labelling elements with the spec index.
// Throws ValidationError when centers coincide or elements of different
// subarrays come closer than lambda / 2.
ArrayGeometry build_distributed(const std::vector<SubarraySpec>& subarrays, double carrier_frequency,
                                int ports_per_element = 1);

// 2 D^2 / lambda with D = geometry.aperture().
double fraunhofer_distance(const ArrayGeometry& geometry);

// floor(aperture_length / (lambda / 2)): half-wavelength elements that fit
// along one side of a square aperture.
int elements_per_side(double aperture_length, double carrier_frequency);

// (f_c / f_0)^2 / k: growth of the BS antenna count that keeps the free-space
// pathloss at the f_0 level when the UE carries k times the baseline antennas.
double bs_antenna_scaling_factor(double carrier_frequency, double baseline_frequency,
                                 double ue_antenna_multiplier = 1.0);

// f_c / f_0: factor by which the half-power beamwidth of a fixed aperture shrinks.
double beamwidth_ratio(double carrier_frequency, double baseline_frequency);

// bits/symbol * spatial DOF * bandwidth, in bit/s.
double peak_rate(double bits_per_symbol, double dof, double bandwidth);

// Peak spectral efficiency (b/s/Hz) needed to hit `target_rate` in `bandwidth`.
double required_spectral_efficiency(double target_rate, double bandwidth);

struct BandPlan {
  std::string name;
  std::string regions;
  double low = 0.0;   // Hz
  double high = 0.0;  // Hz

  double bandwidth() const noexcept { return high - low; }
  double center() const noexcept { return 0.5 * (low + high); }
};

// Candidate 6G bands identified at WRC-23, plus the legacy 3.5 GHz reference.
const std::vector<BandPlan>& candidate_bands();

// Throws ValidationError for unknown names.
const BandPlan& find_band(const std::string& name);

}  // namespace gmimo
