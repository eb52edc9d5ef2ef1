#include "gmimo/beamfocus.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "gmimo/csv.hpp"
#include "gmimo/errors.hpp"
#include "gmimo/parallel.hpp"
#include "gmimo/wavefield.hpp"

namespace gmimo {

namespace {

void validate_axis(const std::vector<double>& axis, const char* name) {
  if (axis.size() < 2) {
    throw ValidationError("beamfocus", std::string(name) + " needs at least two samples");
  }
  for (std::size_t i = 0; i < axis.size(); ++i) {
    if (!std::isfinite(axis[i])) throw ValidationError("beamfocus", std::string(name) + " has non-finite entries");
    if (i > 0 && !(axis[i] > axis[i - 1])) {
      throw ValidationError("beamfocus", std::string(name) + " must be strictly increasing");
    }
  }
}

}  // namespace

std::vector<double> linear_axis(double first, double last, double step) {
  if (!(step > 0.0) || !std::isfinite(first) || !std::isfinite(last) || !(last >= first)) {
    throw ValidationError("beamfocus", "axis needs finite bounds with last >= first and step > 0");
  }
  const auto count = static_cast<std::size_t>(std::floor((last - first) / step + 1e-9)) + 1;
  std::vector<double> axis(count);
  for (std::size_t i = 0; i < count; ++i) axis[i] = first + static_cast<double>(i) * step;
  return axis;
}

ComplexVector focus_weights(const ArrayGeometry& geometry, const Point3& focal_point) {
  const ComplexVector a = nearfield_steering(geometry, focal_point);
  return a.conjugate() / a.norm();
}

double gain_at(const ArrayGeometry& geometry, const ComplexVector& weights, const Point3& point) {
  if (static_cast<std::size_t>(weights.size()) != geometry.element_count()) {
    throw DimensionError("beamfocus", "weight length " + std::to_string(weights.size()) + " != element count " +
                                          std::to_string(geometry.element_count()));
  }
  const ComplexVector a = nearfield_steering(geometry, point);
  // w already carries the conjugation, so it is applied as w^T a.
  const Complex response = weights.transpose() * a;
  // Cauchy-Schwarz bounds this by ||w||^2 = 1; clamp rounding overshoot.
  return std::min(1.0, std::norm(response) / static_cast<double>(a.size()));
}

SpatialGrid beampattern(const ArrayGeometry& geometry, const Point3& focal_point, const std::vector<double>& x_axis,
                        const std::vector<double>& y_axis, unsigned threads) {
  validate_axis(x_axis, "x axis");
  validate_axis(y_axis, "y axis");
  const ComplexVector weights = focus_weights(geometry, focal_point);

  SpatialGrid grid{x_axis, y_axis, std::vector<double>(x_axis.size() * y_axis.size())};
  const std::size_t nx = x_axis.size();
  parallel_for(y_axis.size(), threads, [&](std::size_t iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      grid.values[iy * nx + ix] = gain_at(geometry, weights, Point3(x_axis[ix], y_axis[iy], focal_point.z()));
    }
  });
  return grid;
}

DepthOfFocus depth_of_focus(const SpatialGrid& grid, const Point3& focal_point) {
  validate_axis(grid.x_axis, "x axis");
  validate_axis(grid.y_axis, "y axis");
  if (grid.values.size() != grid.nx() * grid.ny()) {
    throw DimensionError("beamfocus", "grid value count does not match its axes");
  }

  const double x_step = grid.x_axis[1] - grid.x_axis[0];
  std::size_t column = grid.nx();
  for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
    if (std::abs(grid.x_axis[ix] - focal_point.x()) <= 1e-6 * x_step) {
      column = ix;
      break;
    }
  }
  if (column == grid.nx()) {
    throw ValidationError("beamfocus", "focal point x is not on a grid column");
  }
  if (focal_point.y() < grid.y_axis.front() || focal_point.y() > grid.y_axis.back()) {
    throw ValidationError("beamfocus", "focal point y lies outside the grid");
  }

  std::size_t row = 0;
  for (std::size_t iy = 1; iy < grid.ny(); ++iy) {
    if (std::abs(grid.y_axis[iy] - focal_point.y()) < std::abs(grid.y_axis[row] - focal_point.y())) row = iy;
  }

  DepthOfFocus out;
  if (grid.value(column, row) < kHalfPowerGain) {
    out.near_edge = out.far_edge = grid.y_axis[row];
    return out;
  }
  std::size_t low = row;
  while (low > 0 && grid.value(column, low - 1) >= kHalfPowerGain) --low;
  std::size_t high = row;
  while (high + 1 < grid.ny() && grid.value(column, high + 1) >= kHalfPowerGain) ++high;

  out.near_edge = grid.y_axis[low];
  out.far_edge = grid.y_axis[high];
  out.unbounded = low == 0 || high + 1 == grid.ny();
  return out;
}

void write_grid_csv(std::ostream& out, const SpatialGrid& grid) {
  out << "y_m\\x_m";
  for (double x : grid.x_axis) out << ',' << format_number(x);
  out << '\n';
  for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
    out << format_number(grid.y_axis[iy]);
    for (std::size_t ix = 0; ix < grid.nx(); ++ix) out << ',' << format_number(grid.value(ix, iy));
    out << '\n';
  }
}

}  // namespace gmimo
