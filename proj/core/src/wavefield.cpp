#include "gmimo/wavefield.hpp"

#include <cmath>

#include "gmimo/errors.hpp"

namespace gmimo {

namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ValidationError("wavefield", std::string(what) + " must be positive and finite");
  }
}

}  // namespace

void validate(const PolarPosition& position) {
  if (!(position.range > 0.0) || !std::isfinite(position.range)) {
    throw ValidationError("wavefield", "range must be positive");
  }
  if (!(std::abs(position.azimuth) < 0.5 * kPi)) {
    throw ValidationError("wavefield", "azimuth must lie in (-pi/2, pi/2)");
  }
}

Point3 to_cartesian(const PolarPosition& position, const Point3& origin) {
  return origin + Point3(position.range * std::sin(position.azimuth), position.range * std::cos(position.azimuth), 0.0);
}

double friis_received_power(double tx_power, double tx_area, double rx_area, double distance, double wavelength) {
  require_positive(tx_power, "transmit power");
  require_positive(tx_area, "transmit aperture");
  require_positive(rx_area, "receive aperture");
  require_positive(distance, "distance");
  require_positive(wavelength, "wavelength");
  const double dl = distance * wavelength;
  return tx_power * tx_area * rx_area / (dl * dl);
}

ComplexVector nearfield_steering(const ArrayGeometry& geometry, const Point3& source) {
  if (!source.allFinite()) throw ValidationError("wavefield", "source position is not finite");
  const double k = 2.0 * kPi / geometry.wavelength();
  const double reference = (geometry.centroid() - source).norm();
  const auto& positions = geometry.positions();
  ComplexVector a(static_cast<Eigen::Index>(positions.size()));
  for (std::size_t m = 0; m < positions.size(); ++m) {
    const double d = (positions[m] - source).norm();
    if (d == 0.0) {
      throw ValidationError("wavefield", "source coincides with element " + std::to_string(m));
    }
    a(static_cast<Eigen::Index>(m)) = std::polar(1.0, -k * (d - reference));
  }
  return a;
}

ComplexVector farfield_steering(const ArrayGeometry& geometry, double azimuth, const Point3& reference) {
  const double k = 2.0 * kPi / geometry.wavelength();
  const Point3 propagation(-std::sin(azimuth), -std::cos(azimuth), 0.0);
  const auto& positions = geometry.positions();
  ComplexVector a(static_cast<Eigen::Index>(positions.size()));
  for (std::size_t m = 0; m < positions.size(); ++m) {
    a(static_cast<Eigen::Index>(m)) = std::polar(1.0, -k * (positions[m] - reference).dot(propagation));
  }
  return a;
}

ComplexVector farfield_steering(const ArrayGeometry& geometry, double azimuth) {
  return farfield_steering(geometry, azimuth, geometry.centroid());
}

double noise_power(double bandwidth, double noise_figure_db) {
  require_positive(bandwidth, "bandwidth");
  if (!std::isfinite(noise_figure_db)) throw ValidationError("wavefield", "noise figure must be finite");
  return LinkBudget::noise_psd() * from_db(noise_figure_db) * bandwidth;
}

double LinkBudget::noise_power() const { return gmimo::noise_power(bandwidth, noise_figure_db); }

double snr(const LinkBudget& link, double received_power) {
  if (!(received_power >= 0.0) || !std::isfinite(received_power)) {
    throw ValidationError("wavefield", "received power must be nonnegative");
  }
  return received_power / link.noise_power();
}

}  // namespace gmimo
