#include <gtest/gtest.h>

#include <cmath>

#include "gmimo/errors.hpp"
#include "gmimo/geometry.hpp"

namespace gmimo {
namespace {

constexpr double kGHz = 1e9;

TEST(Geometry, WavelengthUsesFixedSpeedOfLight) {
  EXPECT_DOUBLE_EQ(wavelength(15 * kGHz), 2.9979e8 / 15e9);
  EXPECT_THROW(wavelength(0.0), ValidationError);
  EXPECT_THROW(wavelength(-1.0), ValidationError);
}

TEST(ElementsPerSide, FrozenFloorRule) {
  EXPECT_EQ(elements_per_side(0.5, 3.5 * kGHz), 11);  // 0.5 / 0.0428 = 11.67
  EXPECT_EQ(elements_per_side(0.5, 7.8 * kGHz), 26);  // 0.5 / 0.0192 = 26.02
  EXPECT_EQ(elements_per_side(0.5, 15 * kGHz), 50);   // 0.5 / 0.00999 = 50.03
  for (double f : {1e9, 3.5e9, 28e9}) EXPECT_EQ(elements_per_side(wavelength(f) / 2.0, f), 1);
  EXPECT_THROW(elements_per_side(0.0, 1e9), ValidationError);
  EXPECT_THROW(elements_per_side(0.5, -1e9), ValidationError);
}

TEST(ElementsPerSide, DoublingFrequencyDoublesCount) {
  for (double length : {0.04, 0.13, 0.5, 1.7}) {
    int previous = 0;
    for (double f = 1e9; f < 30e9; f *= 1.07) {
      const int n = elements_per_side(length, f);
      EXPECT_GE(n, previous);
      previous = n;
      const int doubled = elements_per_side(length, 2.0 * f);
      EXPECT_TRUE(doubled == 2 * n || doubled == 2 * n + 1) << length << " m at " << f;
    }
  }
}

TEST(BuildUla, SpacingCenterAndAperture) {
  const double f = 15 * kGHz;
  const double half = wavelength(f) / 2.0;
  const ArrayGeometry two = build_ula(2, f);
  EXPECT_NEAR((two.positions()[1] - two.positions()[0]).norm(), 0.009993, 1e-9);

  const ArrayGeometry one = build_ula(1, f, Point3(1, 2, 3));
  ASSERT_EQ(one.element_count(), 1u);
  EXPECT_TRUE(one.positions()[0].isApprox(Point3(1, 2, 3)));

  for (int n : {1, 2, 7, 48, 101}) {
    const ArrayGeometry ula = build_ula(n, f, Point3(0.3, -2, 0), Point3(1, 1, 0));
    EXPECT_NEAR(ula.aperture(), n * half, 1e-12);
    EXPECT_LE((ula.centroid() - Point3(0.3, -2, 0)).norm(), 1e-12);
  }
  EXPECT_NEAR(build_ula(48, f).aperture(), 0.48, 0.001);
  EXPECT_THROW(build_ula(0, f), ValidationError);
}

TEST(BuildDistributed, TwoSubarraysFiveMetresApart) {
  const double f = 15 * kGHz;
  const double half = wavelength(f) / 2.0;
  const ArrayGeometry g = build_distributed({{24, Point3(-2.5, 0, 0)}, {24, Point3(2.5, 0, 0)}}, f);
  EXPECT_EQ(g.element_count(), 48u);
  EXPECT_EQ(g.subarray_count(), 2);
  // Outer element distance 5 m + 23 spacings, plus one footprint.
  EXPECT_NEAR(g.aperture(), 5.0 + 24 * half, 1e-12);
  EXPECT_NEAR(g.aperture(), 5.23, 0.011);
}

TEST(BuildDistributed, FourSubarrays) {
  const double f = 15 * kGHz;
  const double half = wavelength(f) / 2.0;
  std::vector<SubarraySpec> specs;
  for (double x : {-7.5, -2.5, 2.5, 7.5}) specs.push_back({12, Point3(x, 0, 0)});
  const ArrayGeometry g = build_distributed(specs, f);
  EXPECT_EQ(g.element_count(), 48u);
  EXPECT_EQ(g.subarray_count(), 4);
  EXPECT_NEAR(g.aperture(), 15.0 + 12 * half, 1e-12);
  EXPECT_NEAR(g.aperture(), 15.11, 0.011);
}

TEST(BuildDistributed, SingleSubarrayMatchesUla) {
  const double f = 7.8 * kGHz;
  const ArrayGeometry a = build_distributed({{9, Point3(1, 1, 0)}}, f);
  const ArrayGeometry b = build_ula(9, f, Point3(1, 1, 0));
  ASSERT_EQ(a.element_count(), b.element_count());
  for (std::size_t i = 0; i < a.element_count(); ++i) EXPECT_TRUE(a.positions()[i].isApprox(b.positions()[i]));
  EXPECT_DOUBLE_EQ(a.aperture(), b.aperture());
}

TEST(BuildDistributed, RejectsOverlapAndSharedCenters) {
  const double f = 15 * kGHz;
  EXPECT_THROW(build_distributed({{24, Point3(0, 0, 0)}, {24, Point3(0.1, 0, 0)}}, f), ValidationError);
  EXPECT_THROW(build_distributed({{4, Point3(0, 0, 0)}, {4, Point3(0, 0, 0)}}, f), ValidationError);
  // Abutting at exactly lambda/2 is allowed.
  const double half = wavelength(f) / 2.0;
  EXPECT_NO_THROW(build_distributed({{2, Point3(0, 0, 0)}, {2, Point3(2 * half, 0, 0)}}, f));
}

TEST(ArrayGeometry, RejectsDenseSubarrayAndBadPorts) {
  const double f = 15 * kGHz;
  const double lambda = wavelength(f);
  EXPECT_THROW(ArrayGeometry({Point3(0, 0, 0), Point3(0.4 * lambda, 0, 0)}, f), ValidationError);
  EXPECT_NO_THROW(ArrayGeometry({Point3(0, 0, 0), Point3(0.46 * lambda, 0, 0)}, f));
  EXPECT_THROW(ArrayGeometry({Point3(0, 0, 0)}, f, 3), ValidationError);
  EXPECT_THROW(ArrayGeometry({}, f), ValidationError);
  EXPECT_THROW(ArrayGeometry({Point3(NAN, 0, 0)}, f), ValidationError);
}

TEST(Fraunhofer, PaperAnchorAndHandValues) {
  const double f15 = 15 * kGHz;
  // 2 (n lambda/2)^2 / lambda = n^2 lambda / 2
  EXPECT_NEAR(fraunhofer_distance(build_ula(48, f15)), 48.0 * 48.0 * wavelength(f15) / 2.0, 1e-9);
  EXPECT_NEAR(fraunhofer_distance(build_ula(48, f15)), 23.04, 0.1);
  EXPECT_NEAR(fraunhofer_distance(build_ula(11, 3.5 * kGHz)), 121.0 * wavelength(3.5 * kGHz) / 2.0, 1e-9);
  EXPECT_NEAR(fraunhofer_distance(build_ula(11, 3.5 * kGHz)), 5.19, 0.01);
  // A single element keeps its lambda/2 footprint: lambda/2, negligible at array scale.
  EXPECT_NEAR(fraunhofer_distance(build_ula(1, f15)), wavelength(f15) / 2.0, 1e-15);
}

TEST(Fraunhofer, ScalesWithSquareOfDilation) {
  const double f = 15 * kGHz;
  const ArrayGeometry base = build_distributed({{6, Point3(-1, 0, 0)}, {6, Point3(1, 0.2, 0)}}, f);
  for (double s : {1.5, 3.0, 10.0}) {
    std::vector<Point3> scaled = base.positions();
    for (Point3& p : scaled) p *= s;
    const ArrayGeometry dilated(scaled, f, 1, base.subarray_index());
    // The footprint term is not dilated, so compare on the element span only.
    const double span = base.aperture() - wavelength(f) / 2.0;
    const double dilated_span = dilated.aperture() - wavelength(f) / 2.0;
    EXPECT_NEAR(2 * dilated_span * dilated_span / wavelength(f), s * s * 2 * span * span / wavelength(f), 1e-6);
  }
}

TEST(ScalingLaws, AntennaScalingFactorMatchesFigureAnchors) {
  const double f0 = 3.5 * kGHz;
  EXPECT_NEAR(bs_antenna_scaling_factor(7.8 * kGHz, f0, 1), 4.97, 1e-2);
  EXPECT_NEAR(bs_antenna_scaling_factor(7.8 * kGHz, f0, 2), 2.48, 1e-2);
  EXPECT_NEAR(bs_antenna_scaling_factor(7.8 * kGHz, f0, 4), 1.24, 1e-2);
  EXPECT_NEAR(bs_antenna_scaling_factor(15 * kGHz, f0, 1), 18.37, 1e-2);
  EXPECT_NEAR(bs_antenna_scaling_factor(15 * kGHz, f0, 2), 9.18, 1e-2);
  EXPECT_NEAR(bs_antenna_scaling_factor(15 * kGHz, f0, 4), 4.59, 1e-2);
  EXPECT_DOUBLE_EQ(bs_antenna_scaling_factor(f0, f0, 1), 1.0);
  EXPECT_THROW(bs_antenna_scaling_factor(f0, f0, 0.5), ValidationError);
}

TEST(ScalingLaws, FactorTimesMultiplierIndependentOfMultiplier) {
  for (double f : {4.6e9, 7.8e9, 15e9, 24e9}) {
    const double reference = bs_antenna_scaling_factor(f, 3.5e9, 1.0);
    for (double k : {1.0, 1.5, 2.0, 4.0, 16.0}) {
      EXPECT_NEAR(bs_antenna_scaling_factor(f, 3.5e9, k) * k, reference, 1e-12 * reference);
    }
  }
}

TEST(ScalingLaws, BeamwidthRatio) {
  EXPECT_NEAR(beamwidth_ratio(7.8 * kGHz, 3.5 * kGHz), 2.2, 0.05);
  EXPECT_NEAR(beamwidth_ratio(15 * kGHz, 3.5 * kGHz), 4.3, 0.05);
  EXPECT_DOUBLE_EQ(beamwidth_ratio(3.5 * kGHz, 3.5 * kGHz), 1.0);
}

TEST(ScalingLaws, PeakRateArithmetic) {
  EXPECT_DOUBLE_EQ(peak_rate(12, 16, 1.2e9), 230.4e9);
  EXPECT_DOUBLE_EQ(peak_rate(1, 1, 1), 1.0);
  EXPECT_NEAR(required_spectral_efficiency(200e9, 1.2e9), 166.67, 0.01);
  EXPECT_THROW(peak_rate(0, 16, 1e9), ValidationError);
}

TEST(BandPlan, CandidateBandwidths) {
  EXPECT_DOUBLE_EQ(find_band("4.4-4.8GHz").bandwidth(), 400e6);
  EXPECT_NEAR(find_band("7.75-8.4GHz").bandwidth(), 650e6, 1.0);
  EXPECT_NEAR(find_band("7.125-8.4GHz").bandwidth(), 1275e6, 1.0);
  EXPECT_NEAR(find_band("14.8-15.35GHz").bandwidth(), 550e6, 1.0);
  for (const BandPlan& b : candidate_bands()) EXPECT_GT(b.high, b.low);
  EXPECT_THROW(find_band("60GHz"), ValidationError);
}

}  // namespace
}  // namespace gmimo
