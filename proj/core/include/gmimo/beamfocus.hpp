#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "gmimo/geometry.hpp"
#include "gmimo/numerics.hpp"

namespace gmimo {

// Relative beamforming gain sampled on a rectangular grid in the azimuth plane.
// values are stored row-major with y as the slow index: value(ix, iy) = values[iy * nx + ix].
struct SpatialGrid {
  std::vector<double> x_axis;  // m, strictly increasing
  std::vector<double> y_axis;  // m, strictly increasing
  std::vector<double> values;

  std::size_t nx() const noexcept { return x_axis.size(); }
  std::size_t ny() const noexcept { return y_axis.size(); }
  double value(std::size_t ix, std::size_t iy) const { return values[iy * nx() + ix]; }
};

// Evenly spaced axis from `first` to `last` inclusive (last is included when it
// lies on the lattice to within 1e-9 steps).
std::vector<double> linear_axis(double first, double last, double step);

// Matched-filter weights w = conj(a(focal)) / ||a(focal)|| using the spherical-wave response.
ComplexVector focus_weights(const ArrayGeometry& geometry, const Point3& focal_point);

// |w^T a(point)|^2 / N, i.e. the matched-filter response with the conjugation
// held in w (as returned by focus_weights). Equals 1 at the focal point of focus_weights and lies in [0, 1]
// for any unit-norm w. Throws DimensionError when w does not match the element count.
double gain_at(const ArrayGeometry& geometry, const ComplexVector& weights, const Point3& point);

// gain_at over every (x, y, 0) cell of the grid. Rows are evaluated in
// independent chunks on up to `threads` workers.
SpatialGrid beampattern(const ArrayGeometry& geometry, const Point3& focal_point, const std::vector<double>& x_axis,
                        const std::vector<double>& y_axis, unsigned threads = 1);

inline constexpr double kHalfPowerGain = 0.5;

struct DepthOfFocus {
  double near_edge = 0.0;  // m, first y with gain >= 0.5 in the interval
  double far_edge = 0.0;   // m, last y with gain >= 0.5 in the interval
  bool unbounded = false;  // the interval reaches the first or last grid row

  // far_edge - near_edge, or nullopt when unbounded.
  std::optional<double> length() const {
    if (unbounded) return std::nullopt;
    return far_edge - near_edge;
  }
};

// Maximal contiguous run of cells with gain >= 0.5 along the grid column
// through the focal point (the broadside bearing of an array centered on the
// y axis). Throws ValidationError when focal_point.x() is not one of the grid
// x values or focal_point.y() lies outside the y axis.
DepthOfFocus depth_of_focus(const SpatialGrid& grid, const Point3& focal_point);

// Header row "y_m\x_m,<x values>", then one row per y: "<y>,<gains>".
void write_grid_csv(std::ostream& out, const SpatialGrid& grid);

}  // namespace gmimo
