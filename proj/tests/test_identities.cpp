#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "oracle/hp_oracle.hpp"
#include "ptheta/identities.hpp"

using namespace ptheta;

TEST(FunctionalEquation, ExactAtOrigin) {
  const CertifiedValue r = functional_equation_residual(0.4, 0.0, 1e-12);
  EXPECT_EQ(r.value, std::complex<double>(0.0));
  EXPECT_EQ(r.err, 0.0);
}

TEST(FunctionalEquation, ResidualVanishesAtExamples) {
  const CertifiedValue a = functional_equation_residual(0.5, 1.0, 1e-15);
  EXPECT_LE(std::abs(a.value), a.err);
  EXPECT_LE(std::abs(a.value), 1e-12);
  const CertifiedValue b = functional_equation_residual(-0.9, {3.0, 2.0}, 1e-15);
  EXPECT_LE(std::abs(b.value), b.err);
}

TEST(FunctionalEquation, HoldsOnRandomSamples) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> uq(-0.95, 0.95);
  std::uniform_real_distribution<double> ux(-20.0, 20.0);
  for (int i = 0; i < 10000; ++i) {
    const double q = uq(rng);
    const std::complex<double> x(ux(rng), ux(rng) * (i % 4 == 0 ? 0.0 : 1.0));
    const CertifiedValue r = functional_equation_residual(q, x, 1e-14);
    ASSERT_LE(std::abs(r.value), r.err) << q << " " << x;
  }
}

TEST(Decompose, OriginGivesUnitParts) {
  const Decomposition d = decompose(0.6, 0.0, 1e-12);
  EXPECT_EQ(d.theta1.value, std::complex<double>(1.0));
  EXPECT_EQ(d.recombined.value, std::complex<double>(1.0));
}

TEST(Decompose, BothPartsPositiveNearMinusOne) {
  const Decomposition d = decompose(-0.98, -2.0, 1e-14);
  EXPECT_EQ(d.theta1.certified_sign(), 1);
  const CertifiedValue qx_theta2 = scale(d.theta2, -0.98 * -2.0);
  EXPECT_EQ(qx_theta2.certified_sign(), 1);
}

TEST(Decompose, RecombinesToOracle) {
  const Decomposition d = decompose(-0.5, 1.5, 1e-15);
  const auto o = oracle::to_complex(oracle::theta(-0.5, 1.5));
  EXPECT_LE(std::abs(d.recombined.value - o), 1e-12);
  EXPECT_LE(std::abs(d.recombined.value - o), d.recombined.err);
}

TEST(Decompose, AgreesWithSeriesInBothCases) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> uq(-0.95, 0.95);
  std::uniform_real_distribution<double> ux(-10.0, 10.0);
  for (int i = 0; i < 2000; ++i) {
    const double q = uq(rng);
    const std::complex<double> x(ux(rng), ux(rng));
    const Decomposition d = decompose(q, x, 1e-14);
    const CertifiedValue t = theta_value(q, x, 1e-14);
    ASSERT_LE(std::abs(d.recombined.value - t.value), d.recombined.err + t.err) << q << " " << x;
  }
}

TEST(HeatEquation, ResidualVanishes) {
  EXPECT_EQ(pde_residual(0.3, 0.0, 1e-12).value, std::complex<double>(0.0));
  for (auto [q, x] : {std::pair<double, double>{0.4, -2.0}, {-0.8, 1.2}}) {
    const CertifiedValue r = pde_residual(q, x, 1e-15);
    EXPECT_LE(std::abs(r.value), r.err);
    EXPECT_LE(std::abs(r.value), 1e-10);
  }
}

TEST(MixedIdentities, ResidualsVanish) {
  const auto z = mixed_identity_residuals(0.3, 0.0, 1e-12);
  EXPECT_EQ(z.first.value, std::complex<double>(0.0));
  EXPECT_EQ(z.second.value, std::complex<double>(0.0));
  for (auto [q, x] : {std::pair<double, double>{0.6, -1.5}, {-0.7, 2.0}}) {
    const auto r = mixed_identity_residuals(q, x, 1e-15);
    EXPECT_LE(std::abs(r.first.value), r.first.err);
    EXPECT_LE(std::abs(r.second.value), r.second.err);
    EXPECT_LE(std::abs(r.first.value), 1e-10);
    EXPECT_LE(std::abs(r.second.value), 1e-10);
  }
}

TEST(MixedIdentities, HoldOnRandomSamples) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> uq(-0.9, 0.9);
  std::uniform_real_distribution<double> ux(-8.0, 8.0);
  for (int i = 0; i < 1000; ++i) {
    const double q = uq(rng);
    const std::complex<double> x(ux(rng), ux(rng));
    const CertifiedValue p = pde_residual(q, x, 1e-14);
    ASSERT_LE(std::abs(p.value), p.err) << q << " " << x;
    const auto r = mixed_identity_residuals(q, x, 1e-14);
    ASSERT_LE(std::abs(r.first.value), r.first.err) << q << " " << x;
    ASSERT_LE(std::abs(r.second.value), r.second.err) << q << " " << x;
  }
}

TEST(Phi, LimitsAndSlopeAtZero) {
  EXPECT_EQ(phi(0.0, 2.0, 1e-12).value, std::complex<double>(1.0));
  EXPECT_NEAR(phi(1e-9, 3.0, 1e-15).real(), 1.0, 1e-12);
  const double h = 1e-4;
  const double slope = (phi(h, 1.0, 1e-16).real() - 1.0) / h;
  EXPECT_NEAR(slope, -1.0, 2e-4);
}

TEST(Phi, HalfIndexIsAlternatingGaussianSum) {
  for (double q : {0.1, 0.5, 0.8, 0.95}) {
    const CertifiedValue a = phi(q, 0.5, 1e-15);
    const CertifiedValue b = nu_series(q, 1e-16);
    EXPECT_LE(std::abs(a.value - b.value), a.err + b.err) << q;
  }
}

TEST(Phi, TwoAtHalfMatchesOracle) {
  const CertifiedValue v = phi(0.5, 2.0, 1e-15);
  const auto o = oracle::to_complex(oracle::theta(0.5, -0.5));
  EXPECT_LE(std::abs(v.value - o), v.err);
}

TEST(Katsnelson, MembershipFollowsTheSpiral) {
  EXPECT_TRUE(inside_katsnelson_a(0.0));
  EXPECT_TRUE(inside_katsnelson_a(-3.0));
  EXPECT_TRUE(inside_katsnelson_a(-23.0));
  EXPECT_FALSE(inside_katsnelson_a(-24.0));  // beyond e^pi
  EXPECT_FALSE(inside_katsnelson_a(2.0));
  EXPECT_FALSE(inside_katsnelson_a(1.0));
  EXPECT_TRUE(inside_katsnelson_b(0.5));
  EXPECT_TRUE(inside_katsnelson_b(2.0));   // -x^2 = -4 lies on the inner segment
  EXPECT_FALSE(inside_katsnelson_b(6.0));  // -x^2 = -36 lies beyond e^pi
}

TEST(Katsnelson, ResidualShrinksTowardTheLimit) {
  EXPECT_EQ(katsnelson_residual(0.9, 0.0), 0.0);
  EXPECT_LT(katsnelson_residual(0.999, 0.5), 0.05);
  double previous = katsnelson_residual(0.9, -3.0);
  for (double q : {0.95, 0.97, 0.99}) {
    const double r = katsnelson_residual(q, -3.0);
    EXPECT_LT(r, previous) << q;
    previous = r;
  }
  EXPECT_LT(katsnelson_residual(-0.99, 0.5), katsnelson_residual(-0.9, 0.5));
  try {
    katsnelson_residual(0.9, 3.0);
    FAIL();
  } catch (const NumericError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::contour_membership);
  }
}
