#pragma once

#include <cmath>

#include "gmimo/geometry.hpp"
#include "gmimo/numerics.hpp"

namespace gmimo {

inline constexpr double kBoltzmann = 1.380649e-23;  // J/K
inline constexpr double kNoiseTemperature = 290.0;  // K

// Location in the azimuth plane relative to an array reference point.
// Azimuth is measured from broadside (+y) towards +x.
struct PolarPosition {
  double azimuth = 0.0;  // rad, in (-pi/2, pi/2)
  double range = 1.0;    // m, > 0

  bool operator==(const PolarPosition&) const = default;
};

// Throws ValidationError when range <= 0 or azimuth is outside (-pi/2, pi/2).
void validate(const PolarPosition& position);

// Cartesian point `position` relative to `origin` (z unchanged).
Point3 to_cartesian(const PolarPosition& position, const Point3& origin = Point3::Zero());

// Free-space received power p_t * a_t * a_r / (d * lambda)^2 for effective
// apertures a_t, a_r in m^2.
double friis_received_power(double tx_power, double tx_area, double rx_area, double distance, double wavelength);

// Spherical-wave response: entry m = exp(-j 2 pi (d_m - d_ref) / lambda),
// d_ref measured from the geometry centroid. Unit-modulus entries.
// Throws ValidationError if the source coincides with an element.
ComplexVector nearfield_steering(const ArrayGeometry& geometry, const Point3& source);

// Plane-wave response for a wave arriving from `azimuth`; the propagation
// direction is u = -(sin az, cos az, 0) and entry m = exp(-j 2 pi / lambda <p_m - c, u>).
ComplexVector farfield_steering(const ArrayGeometry& geometry, double azimuth);

// Plane-wave phases relative to an arbitrary reference point instead of the centroid.
ComplexVector farfield_steering(const ArrayGeometry& geometry, double azimuth, const Point3& reference);

struct LinkBudget {
  double tx_power = 1.0;        // W
  double bandwidth = 1.0;       // Hz
  double noise_figure_db = 0.0; // dB

  // Thermal noise PSD kT at 290 K, W/Hz.
  static constexpr double noise_psd() { return kBoltzmann * kNoiseTemperature; }
  // kT * 10^(NF/10) * B, W.
  double noise_power() const;
};

// kT B 10^(NF/10).
double noise_power(double bandwidth, double noise_figure_db);

// received_power / noise_power(link). Zero received power gives zero SNR.
double snr(const LinkBudget& link, double received_power);

inline double to_db(double linear) { return 10.0 * std::log10(linear); }
inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace gmimo
