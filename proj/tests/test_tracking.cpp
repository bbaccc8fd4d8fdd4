#include <gtest/gtest.h>

#include <cmath>

#include "ptheta/tracking.hpp"

using namespace ptheta;

namespace {

ZeroRecord zero_with_index(double q, int index, double lo, double hi) {
  for (const auto& z : real_zeros(q, lo, hi, 1e-13)) {
    if (z.index == index) return z;
  }
  ADD_FAILURE() << "zero " << index << " not found at q = " << q;
  return {};
}

void expect_on_curve(const Trajectory& t) {
  ASSERT_EQ(t.q_grid.size(), t.points.size());
  for (std::size_t i = 0; i < t.points.size(); ++i) {
    const Jet j = theta_jet(t.q_grid[i], t.points[i], 1e-18);
    const double floor = 10.0 * (j.f.err + ThetaEvaluator::location_err(j, t.points[i]));
    EXPECT_LE(std::abs(j.f.value), std::max(1e-12, floor)) << t.q_grid[i];
  }
}

}  // namespace

TEST(TrackZero, FirstZeroStaysRealAndSmooth) {
  const ZeroRecord start = zero_with_index(0.05, 1, -100.0, -1.0);
  const Trajectory t = track_zero(start, 0.30);
  EXPECT_DOUBLE_EQ(t.q_grid.back(), 0.30);
  expect_on_curve(t);
  for (std::size_t i = 1; i < t.points.size(); ++i) {
    EXPECT_EQ(t.points[i].imag(), 0.0);
    EXPECT_GT(t.q_grid[i], t.q_grid[i - 1]);
    EXPECT_LT(std::abs(t.points[i] - t.points[i - 1]), 0.5 * std::abs(t.points[i - 1]));
  }
}

TEST(TrackZero, SecondZeroIncreasesWithParameter) {
  const ZeroRecord start = zero_with_index(0.05, 2, -1000.0, -100.0);
  const Trajectory t = track_zero(start, 0.30);
  expect_on_curve(t);
  for (std::size_t i = 1; i < t.points.size(); ++i) EXPECT_GT(t.points[i].real(), t.points[i - 1].real()) << i;
}

TEST(TrackZero, RunsIntoTheDoubleZero) {
  const ZeroRecord start = zero_with_index(0.25, 1, -20.0, -1.0);
  try {
    track_zero(start, 0.35);
    FAIL();
  } catch (const StepUnderflow& e) {
    EXPECT_EQ(e.kind(), ErrorKind::step_underflow);
    EXPECT_NEAR(e.q_reached(), 0.3092493386, 1e-6);
  }
}

TEST(TrackZero, ComplexPairMovesWithoutReturningToTheAxis) {
  const ZeroSearch s = complex_zeros(0.4, Region::disk(0.0, 10.0), 1e-12);
  ZeroRecord pair;
  for (const auto& z : s.zeros) {
    if (z.kind == ZeroKind::complex_pair) pair = z;
  }
  ASSERT_EQ(pair.kind, ZeroKind::complex_pair);
  const Trajectory t = track_zero(pair, 0.5);
  expect_on_curve(t);
  for (const auto& x : t.points) EXPECT_GT(x.imag(), 0.1);
}

TEST(TrackZero, DescendingGridInCaseB) {
  const auto zs = real_zeros(-0.3, 1.0, 10.0, 1e-12);
  ASSERT_FALSE(zs.empty());
  const Trajectory t = track_zero(zs.front(), -0.6);
  expect_on_curve(t);
  for (std::size_t i = 1; i < t.q_grid.size(); ++i) EXPECT_LT(t.q_grid[i], t.q_grid[i - 1]);
}

TEST(TrackZero, RejectsUnrefinedStart) {
  ZeroRecord z;
  z.q = 0.2;
  z.x = -3.0;
  z.residual = 0.5;
  z.err = 1e-16;
  EXPECT_THROW(track_zero(z, 0.3), NumericError);
}

TEST(TrackPair, CollisionAtFirstSpectralValue) {
  const ZeroRecord a = zero_with_index(0.05, 1, -1000.0, -1.0);
  const ZeroRecord b = zero_with_index(0.05, 2, -1000.0, -1.0);
  const PairTrajectory p = track_pair(a, b, 0.5);
  ASSERT_TRUE(p.collision_q.has_value());
  EXPECT_NEAR(*p.collision_q, 0.3092493386, 1e-6);
  EXPECT_TRUE(p.first.near_double);
  EXPECT_LT(p.closest, 1e-2);
  expect_on_curve(p.first);
  expect_on_curve(p.second);
}

TEST(TrackPair, NoCollisionBeforeTarget) {
  const ZeroRecord a = zero_with_index(0.05, 1, -1000.0, -1.0);
  const ZeroRecord b = zero_with_index(0.05, 2, -1000.0, -1.0);
  const PairTrajectory p = track_pair(a, b, 0.2);
  EXPECT_FALSE(p.collision_q.has_value());
  EXPECT_DOUBLE_EQ(p.first.q_grid.back(), 0.2);
  EXPECT_GT(p.closest, 1.0);
}
