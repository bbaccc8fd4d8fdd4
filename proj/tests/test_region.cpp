#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "ptheta/region.hpp"

using namespace ptheta;

namespace {

// Winding of the boundary around z, measured by summing argument steps.
double winding_around(const Region& r, std::complex<double> z) {
  double total = 0.0;
  for (const auto& piece : r.boundary()) {
    std::complex<double> prev = piece_point(piece, 0.0) - z;
    for (int i = 1; i <= 2000; ++i) {
      const std::complex<double> cur = piece_point(piece, i / 2000.0) - z;
      total += std::arg(cur / prev);
      prev = cur;
    }
  }
  return total / (2.0 * std::numbers::pi);
}

}  // namespace

TEST(Region, DiskMembershipAndBoundary) {
  const Region d = Region::disk({1.0, 1.0}, 2.0);
  EXPECT_TRUE(d.contains({1.0, 1.0}));
  EXPECT_TRUE(d.contains({3.0, 1.0}));
  EXPECT_FALSE(d.contains({3.1, 1.0}));
  EXPECT_NEAR(winding_around(d, {1.5, 0.5}), 1.0, 1e-9);
  EXPECT_NEAR(winding_around(d, {10.0, 0.0}), 0.0, 1e-9);
  EXPECT_NEAR(d.boundary_distance({1.0, 1.0}), 2.0, 1e-15);
  EXPECT_NEAR(d.bounding_radius(), 2.0 + std::sqrt(2.0), 1e-15);
  const auto iv = d.real_intervals();
  ASSERT_EQ(iv.size(), 1u);
  EXPECT_NEAR(iv[0].first, 1.0 - std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(iv[0].second, 1.0 + std::sqrt(3.0), 1e-15);
}

TEST(Region, EveryShapeIsCounterclockwise) {
  const std::pair<Region, std::complex<double>> cases[] = {
      {Region::disk(0.0, 1.0), {0.2, 0.1}},
      {Region::rectangle(-2.0, 1.0, -1.0, 3.0), {0.0, 0.0}},
      {Region::right_half_annulus(1.0, 5.0), {2.0, 1.0}},
      {Region::left_half_disk(49.8), {-10.0, 3.0}},
      {Region::left_clipped_disk(3.0, 3.0 / std::numbers::sqrt2), {-1.0, -1.0}},
  };
  for (const auto& [r, inside] : cases) {
    EXPECT_TRUE(r.contains(inside)) << r.describe();
    EXPECT_NEAR(winding_around(r, inside), 1.0, 1e-9) << r.describe();
  }
}

TEST(Region, HalfAnnulusExcludesHoleAndLeftHalf) {
  const Region a = Region::right_half_annulus(1.0, 5.0);
  EXPECT_FALSE(a.contains(0.5));
  EXPECT_FALSE(a.contains({-2.0, 0.0}));
  EXPECT_TRUE(a.contains({0.0, 3.0}));
  EXPECT_NEAR(winding_around(a, 0.0), 0.0, 1e-9);
  ASSERT_EQ(a.real_intervals().size(), 1u);
  EXPECT_EQ(a.real_intervals()[0].first, 1.0);
}

TEST(Region, ZeroFreeDomainShape) {
  const Region d = zero_free_domain();
  EXPECT_TRUE(d.contains(-3.0));
  EXPECT_TRUE(d.contains({-1.0, 2.1}));
  EXPECT_FALSE(d.contains({-1.0, 2.2}));
  EXPECT_FALSE(d.contains({0.1, 0.0}));
  EXPECT_FALSE(d.contains({-2.9, 2.0}));
  EXPECT_NEAR(d.boundary_distance({-1.0, 0.0}), 1.0, 1e-15);
}

TEST(Region, RejectsDegenerateShapes) {
  EXPECT_THROW(Region::disk(0.0, 0.0), NumericError);
  EXPECT_THROW(Region::disk(0.0, INFINITY), NumericError);
  EXPECT_THROW(Region::rectangle(1.0, 1.0, 0.0, 1.0), NumericError);
  EXPECT_THROW(Region::right_half_annulus(2.0, 1.0), NumericError);
  EXPECT_THROW(Region::left_clipped_disk(1.0, 2.0), NumericError);
}

TEST(Region, RectangleAwayFromAxisHasNoRealInterval) {
  EXPECT_TRUE(Region::rectangle(0.0, 1.0, 0.5, 1.0).real_intervals().empty());
  EXPECT_EQ(Region::rectangle(0.0, 1.0, -0.5, 1.0).describe(), "rectangle([0,1]x[-0.5,1])");
}
