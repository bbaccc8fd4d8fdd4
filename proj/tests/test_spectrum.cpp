#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "oracle/hp_oracle.hpp"
#include "ptheta/spectrum.hpp"

using namespace ptheta;

namespace {

// Spectral points are reused across tests; computing each once keeps the suite fast.
const SpectralPoint& point(Case c, int k) {
  static std::map<std::pair<int, int>, SpectralPoint> cache;
  const auto key = std::make_pair(static_cast<int>(c), k);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, spectral_point(c, k, 1e-12)).first;
  return it->second;
}

void expect_matches_oracle(const SpectralPoint& p) {
  const oracle::DoubleZero o = oracle::double_zero(oracle::hp(p.q_star), oracle::hp(p.y));
  ASSERT_LT(static_cast<double>(abs(o.f)), 1e-40);
  ASSERT_LT(static_cast<double>(abs(o.fx)), 1e-40);
  EXPECT_NEAR(p.q_star, static_cast<double>(o.q), 4e-16) << p.k;
  EXPECT_NEAR(p.y, static_cast<double>(o.y), 1e-12 * std::fabs(p.y)) << p.k;
}

}  // namespace

TEST(SpectrumA, FirstValueMatchesQuotedDigits) {
  const SpectralPoint& p = point(Case::A, 1);
  EXPECT_NEAR(p.q_star, 0.3092493386, 1e-9);
  EXPECT_LT(p.y, -6.0);
  EXPECT_EQ(p.character, Character::local_min);
}

TEST(SpectrumA, ValuesMatchOracle) {
  for (int k = 1; k <= 6; ++k) expect_matches_oracle(point(Case::A, k));
}

TEST(SpectrumA, SecondValueLiesAboveFirst) {
  EXPECT_GT(point(Case::A, 2).q_star, point(Case::A, 1).q_star);
  EXPECT_LT(point(Case::A, 2).q_star, 1.0);
}

TEST(SpectrumA, DoubleZeroIsRightmost) {
  for (int k = 1; k <= 3; ++k) {
    const SpectralPoint& p = point(Case::A, k);
    EXPECT_LT(p.y, 0.0);
    EXPECT_TRUE(real_zeros(p.q_star, p.y + 1e-3, 0.0, 1e-12).empty()) << k;
    for (const auto& z : real_zeros(p.q_star, -200.0, p.y - 1e-3, 1e-12)) EXPECT_LT(z.x.real(), p.y - 0.1) << k;
  }
}

TEST(SpectrumA, MultiplicityExactlyTwo) {
  for (int k = 1; k <= 6; ++k) {
    const SpectralPoint& p = point(Case::A, k);
    EXPECT_LE(p.residual_theta, 1e-12);
    EXPECT_LE(p.residual_theta_x, 1e-12);
    EXPECT_GT(std::fabs(p.theta_xx), 1e3 * 1e-12);
  }
}

TEST(SpectrumB, QuotedMagnitudes) {
  EXPECT_NEAR(-point(Case::B, 1).q_star, 0.72713332, 1e-6);
  EXPECT_NEAR(-point(Case::B, 2).q_star, 0.78374209, 1e-6);
  EXPECT_NEAR(-point(Case::B, 3).q_star, 0.84160192, 1e-6);
}

TEST(SpectrumB, ParityFixesSignAndCharacter) {
  for (int k = 1; k <= 6; ++k) {
    const SpectralPoint& p = point(Case::B, k);
    EXPECT_LT(p.q_star, 0.0);
    if (k % 2 == 1) {
      EXPECT_LT(p.y, 0.0) << k;
      EXPECT_EQ(p.character, Character::local_min) << k;
    } else {
      EXPECT_GT(p.y, 0.0) << k;
      EXPECT_EQ(p.character, Character::local_max) << k;
    }
    EXPECT_GT(std::fabs(p.theta_xx), 1e3 * 1e-12);
  }
}

TEST(SpectrumB, ValuesMatchOracle) {
  for (int k = 1; k <= 6; ++k) expect_matches_oracle(point(Case::B, k));
}

TEST(SpectrumB, DoubleZeroInItsAnchorInterval) {
  for (int k = 1; k <= 6; ++k) EXPECT_TRUE(double_zero_interval_check(point(Case::B, k))) << k;
  EXPECT_THROW(double_zero_interval_check(point(Case::A, 1)), NumericError);
}

TEST(Spectrum, IndexOutOfRangeIsRejected) {
  EXPECT_THROW(spectral_point_A(0), NumericError);
  EXPECT_THROW(spectral_point_B(7), NumericError);
}

TEST(Ordering, BothCasesIncreaseInMagnitude) {
  std::vector<SpectralPoint> all;
  for (int k = 1; k <= 6; ++k) {
    all.push_back(point(Case::A, k));
    all.push_back(point(Case::B, k));
  }
  EXPECT_TRUE(ordering_check(all).ordered);
  EXPECT_TRUE(ordering_check({point(Case::A, 1)}).ordered);
  SpectralPoint fake = point(Case::B, 3);
  fake.k = 1;
  const OrderingReport r = ordering_check({fake, point(Case::B, 2)});
  EXPECT_FALSE(r.ordered);
  EXPECT_EQ(r.violations.size(), 1u);
}

TEST(PairCount, BetweenSpectralValues) {
  EXPECT_EQ(pair_count_at(0.5 * point(Case::A, 1).q_star, 1e-12), 0);
  EXPECT_EQ(pair_count_at(0.5 * (point(Case::A, 1).q_star + point(Case::A, 2).q_star), 1e-12), 1);
  EXPECT_EQ(pair_count_at(0.5 * (point(Case::A, 2).q_star + point(Case::A, 3).q_star), 1e-12), 2);
  EXPECT_EQ(pair_count_at(0.5 * (point(Case::B, 1).q_star + point(Case::B, 2).q_star), 1e-12), 1);
  EXPECT_EQ(pair_count_at(0.5 * (point(Case::B, 2).q_star + point(Case::B, 3).q_star), 1e-12), 2);
  EXPECT_EQ(pair_count_between(Case::A, 0, 1e-12), 0);
}

TEST(PairCount, CrossingTradesTwoRealZerosForAPair) {
  const double q1 = point(Case::A, 1).q_star;
  const ZeroSearch below = search_zeros(q1 - 0.01, 1e-12);
  const ZeroSearch above = search_zeros(q1 + 0.01, 1e-12);
  int pairs_below = 0, pairs_above = 0;
  for (const auto& z : below.zeros) pairs_below += z.kind == ZeroKind::complex_pair;
  for (const auto& z : above.zeros) pairs_above += z.kind == ZeroKind::complex_pair;
  EXPECT_EQ(pairs_above - pairs_below, 1);
  EXPECT_EQ(below.real_count - above.real_count, 2);
}

TEST(PairCount, NeverDecreasesOnACaseASweep) {
  int previous = 0;
  for (double q = 0.05; q <= 0.75; q += 0.05) {
    const int n = pair_count_at(q, 1e-12);
    int expected = 0;
    for (int k = 1; k <= 6; ++k) expected += point(Case::A, k).q_star < q;
    EXPECT_EQ(n, expected) << q;
    EXPECT_GE(n, previous) << q;
    previous = n;
  }
}

TEST(PairCount, RightHalfPairsConstantBetweenCaseBValues) {
  const double lo = point(Case::B, 2).q_star, hi = point(Case::B, 1).q_star;
  std::optional<int> first;
  for (int i = 1; i <= 5; ++i) {
    const double q = hi + (lo - hi) * i / 6.0;
    const ZeroSearch s = search_zeros(q, 1e-12);
    int right = 0;
    for (const auto& z : s.zeros) right += z.kind == ZeroKind::complex_pair && z.x.real() > 0.0;
    if (!first) first = right;
    EXPECT_EQ(right, *first) << q;
  }
}

TEST(AnchorSigns, QuotedCases) {
  const AnchorSignPair a = sign_at_anchor(-0.5, 1);
  ASSERT_TRUE(a.even.has_value());
  EXPECT_EQ(*a.even, 1);
  EXPECT_EQ(a.odd, -1);
  const AnchorSignPair b = sign_at_anchor(-0.5, 0);
  EXPECT_FALSE(b.even.has_value());
  EXPECT_EQ(b.odd, -1);
  const AnchorSignPair c = sign_at_anchor(-0.9, 2);
  EXPECT_EQ(*c.even, 1);
  EXPECT_EQ(c.odd, -1);
}

TEST(AnchorSigns, ReducedSeriesMatchesOracleAtExactAnchors) {
  for (double q : {-0.3, -0.5, -0.9, -0.97}) {
    for (int s = 0; s <= 3; ++s) {
      const AnchorSigns v = anchor_values(q, s);
      const oracle::hp qh(q);
      const oracle::hp odd_x = -pow(qh, -(2 * s + 1));
      const double o_odd = static_cast<double>(oracle::theta(qh, oracle::hpc{odd_x, 0}).re);
      EXPECT_LE(std::fabs(v.odd.real() - o_odd), v.odd.err + 1e-30) << q << " " << s;
      if (s >= 1) {
        const oracle::hp even_x = -pow(qh, -2 * s);
        const double o_even = static_cast<double>(oracle::theta(qh, oracle::hpc{even_x, 0}).re);
        EXPECT_LE(std::fabs(v.even->real() - o_even), v.even->err + 1e-30) << q << " " << s;
      }
    }
  }
}

TEST(AnchorSigns, HoldAcrossCaseB) {
  for (double q = -0.05; q > -0.995; q -= 0.035) {
    for (int s = 0; s <= 6; ++s) {
      const AnchorSignPair p = sign_at_anchor(q, s);
      EXPECT_EQ(p.odd, -1) << q << " " << s;
      if (s >= 1) EXPECT_EQ(*p.even, 1) << q << " " << s;
    }
  }
}

TEST(AnchorSigns, DomainChecks) {
  EXPECT_THROW(sign_at_anchor(0.5, 1), NumericError);
  EXPECT_THROW(sign_at_anchor(-0.5, -1), NumericError);
  EXPECT_THROW(sign_at_anchor(-0.01, 200), NumericError);
}
