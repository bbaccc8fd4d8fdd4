#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "oracle/hp_oracle.hpp"
#include "ptheta/evaluate.hpp"
#include "ptheta/triple_product.hpp"

using namespace ptheta;

TEST(JacobiThetaStar, VanishesAtMinusOne) {
  for (double q : {0.2, 0.5, 0.9, -0.6}) {
    const CertifiedValue v = jacobi_theta_star(q, -1.0, 1e-14);
    EXPECT_EQ(v.value, std::complex<double>(0.0, 0.0));
    EXPECT_LE(v.err, 1e-20);
  }
}

TEST(JacobiThetaStar, MatchesBilateralSeries) {
  const oracle::hpc o = oracle::bilateral(oracle::hp(0.5), oracle::from({2.0, 0.0}));
  const CertifiedValue v = jacobi_theta_star(0.5, 2.0, 1e-15);
  EXPECT_LE(std::abs(v.value - oracle::to_complex(o)), v.err);
  EXPECT_LE(v.err, 1e-13);
}

TEST(JacobiThetaStar, NearlyVanishesAtNegativePowersOfQ) {
  for (double q : {0.3, 0.6, 0.8}) {
    for (int a = 1; a <= 4; ++a) {
      // x is rounded, so the zero factor only vanishes to rounding level;
      // compare against the bilateral oracle at the rounded point.
      const double x = -std::pow(q, -a);
      const CertifiedValue v = jacobi_theta_star(q, x, 1e-15);
      const auto o = oracle::to_complex(oracle::bilateral(oracle::hp(q), oracle::from({x, 0.0})));
      EXPECT_LE(std::abs(v.value - o), v.err) << q << " " << a;
      EXPECT_LE(std::abs(v.value), 1e-12 * std::abs(x)) << q << " " << a;
    }
  }
}

TEST(JacobiThetaStar, RejectsZeroArgument) {
  try {
    jacobi_theta_star(0.5, 0.0, 1e-12);
    FAIL();
  } catch (const NumericError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::zero_divide);
  }
  EXPECT_THROW(g_tail(0.5, 0.0, 1e-12), NumericError);
}

TEST(GTail, LeadingTermBoundsAtMinusSix) {
  for (double q = 0.01; q < 0.99; q += 0.02) {
    const CertifiedValue g = g_tail(q, -6.0, 1e-15);
    EXPECT_GT(g.real() - g.err, -1.0 / 6.0) << q;
    EXPECT_LT(g.real() + g.err, -1.0 / 6.0 + q / 36.0) << q;
  }
}

TEST(GTail, ZeroParameterLeavesReciprocal) {
  const CertifiedValue g = g_tail(0.0, {2.0, -1.0}, 1e-12);
  EXPECT_LE(std::abs(g.value - 1.0 / std::complex<double>(2.0, -1.0)), 1e-16);
  EXPECT_EQ(g_tail(0.0, 4.0, 1e-12).value, std::complex<double>(0.25, 0.0));
}

TEST(GTail, MatchesSixtyTermOracle) {
  const oracle::hpc o = oracle::g_tail(oracle::hp(0.5), oracle::from({2.0, 0.0}));
  const CertifiedValue g = g_tail(0.5, 2.0, 1e-15);
  EXPECT_LE(std::abs(g.value - oracle::to_complex(o)), g.err);
  EXPECT_NEAR(g.real(), 0.6416325606551538663, 1e-15);
}

TEST(TripleProductRoute, AgreesWithSeries) {
  const TripleProductParts p = theta_via_triple_product(0.5, 2.0, 1e-15);
  const CertifiedValue s = theta_certified(0.5, 2.0, 1e-15);
  EXPECT_LE(std::abs(p.difference.value - s.value), 1e-12);
  EXPECT_LE(std::abs(p.difference.value - s.value), p.difference.err + s.err);

  const TripleProductParts p9 = theta_via_triple_product(0.9, -6.0, 1e-15);
  const std::complex<double> o = oracle::to_complex(oracle::theta(0.9, -6.0));
  EXPECT_LE(std::abs(p9.difference.value - o), p9.difference.err);
}

TEST(TripleProductRoute, MinusOneLeavesNegatedTail) {
  const TripleProductParts p = theta_via_triple_product(0.7, -1.0, 1e-15);
  EXPECT_EQ(p.theta_star.value, std::complex<double>(0.0));
  EXPECT_LE(std::abs(p.difference.value + p.g_tail.value), 1e-16);
}

TEST(TripleProductRoute, AgreesWithSeriesOnRandomSamples) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> uq(0.0, 0.95);
  std::uniform_real_distribution<double> ur(0.1, 20.0);
  std::uniform_real_distribution<double> ua(-3.14159, 3.14159);
  for (int i = 0; i < 400; ++i) {
    const double q = std::max(uq(rng), 1e-3);
    const std::complex<double> x = std::polar(ur(rng), ua(rng));
    const CertifiedValue p = theta_via_triple_product(q, x, 1e-14).difference;
    const CertifiedValue s = theta_certified(q, x, 1e-14);
    EXPECT_LE(std::abs(p.value - s.value), p.err + s.err) << q << " " << x;
  }
}

TEST(TripleProductRoute, CoversOracleWhereSeriesCancels) {
  // Large |x| and q close to one: the series loses every digit, the product does not.
  for (double q : {0.95, 0.97, 0.99}) {
    const CertifiedValue v = theta_value(q, -6.0, 1e-14);
    const double o = static_cast<double>(oracle::theta_wide(q, -6.0));
    EXPECT_LE(std::abs(v.value - o), v.err) << q;
    EXPECT_LT(v.err, 1e-10) << q;
  }
}

TEST(ProductDerivatives, MatchSeriesDerivatives) {
  for (double q : {0.4, -0.7}) {
    for (std::complex<double> x : {std::complex<double>(-30.0, 0.0), std::complex<double>(12.0, 7.0)}) {
      const ProductDerivatives d = product_derivatives(q, x, 1e-15);
      const auto ox = oracle::to_complex(oracle::theta(q, x, 1, 0));
      const auto oq = oracle::to_complex(oracle::theta(q, x, 0, 1));
      EXPECT_LE(std::abs(d.theta_x - ox), 1e-9 * (1.0 + std::abs(ox))) << q << x;
      EXPECT_LE(std::abs(d.theta_q - oq), 1e-9 * (1.0 + std::abs(oq))) << q << x;
    }
  }
}
