#include "treetribes/polyrec.hpp"

#include <gtest/gtest.h>

#include "treetribes/restrict.hpp"
#include "treetribes/rng.hpp"
#include "treetribes/tribes.hpp"

namespace treetribes {
namespace {

TEST(Recurrence, BaseCase) {
  auto [p0, p1] = p0_p1(1, 1);
  EXPECT_EQ(p0, RationalPoly::half_one_minus_p());
  EXPECT_EQ(p1, RationalPoly::half_one_minus_p());
  EXPECT_EQ(p_star(1, 1), RationalPoly::variable());
}

TEST(Recurrence, MatchesEnumerationOracle) {
  for (auto [t, r] : {std::pair{1, 2}, std::pair{1, 3}, std::pair{1, 4}, std::pair{1, 12},
                      std::pair{2, 2}, std::pair{3, 2}}) {
    P01Polys oracle = enumerate_p0p1(build_xor_tribe(t, r).tree);
    auto [p0, p1] = p0_p1(t, r);
    EXPECT_EQ(p0, oracle.p0) << "t=" << t << " r=" << r;
    EXPECT_EQ(p1, oracle.p1) << "t=" << t << " r=" << r;
  }
}

TEST(Recurrence, PartitionAndRange) {
  for (int t = 1; t <= 3; ++t) {
    for (int r = 1; r <= 3; ++r) {
      auto [p0, p1] = p0_p1(t, r);
      RationalPoly pstar = p_star(t, r);
      EXPECT_EQ(p0 + p1 + pstar, RationalPoly::constant(Rat(1)));
      for (int k = 0; k <= 8; ++k) {
        Rat p = rat(k, 8);
        for (const RationalPoly* q : {&p0, &p1, &pstar}) {
          EXPECT_GE(q->eval(p), Rat(0));
          EXPECT_LE(q->eval(p), Rat(1));
        }
      }
    }
  }
}

TEST(Recurrence, SplitVanishesWithoutStars) {
  for (int t = 1; t <= 3; ++t)
    for (int r = 1; r <= 6; ++r)
      EXPECT_EQ(p_star_value(t, r, Rat(0)), Rat(0)) << "t=" << t << " r=" << r;
}

TEST(Recurrence, DegreeGuard) { EXPECT_THROW(p0_p1(2, 16), resource_limit_error); }

TEST(ScaledValues, MatchPolynomialRoute) {
  SampleRng rng(21, 0);
  for (int t = 1; t <= 2; ++t) {
    for (int r = 1; r <= 6; ++r) {
      RationalPoly pstar = p_star(t, r);
      for (int it = 0; it < 3; ++it) {
        uint64_t den = 2 + rng.next() % 400;
        Rat p = Rat(BigInt(rng.next() % (den + 1))) / Rat(BigInt(den));
        EXPECT_EQ(p_star_value(t, r, p), pstar.eval(p)) << "t=" << t << " r=" << r;
      }
    }
  }
}

TEST(ScaledValues, CompareAvoidsNormalization) {
  ScaledP01 v = p01_values(2, 16, rat(1, 1680));
  Rat pstar_approx = rat(1, 1680) * 4;  // far above the true split probability
  EXPECT_LT(v.compare_pstar(pstar_approx), 0);
  EXPECT_GT(v.compare_pstar(Rat(0)), 0);
}

TEST(ScaledValues, ScaleGuard) {
  EXPECT_THROW(p01_values(2, 40, rat(1, 1680)), resource_limit_error);
}

TEST(Truncated, LowCoefficientsExact) {
  for (int r = 1; r <= 6; ++r) {
    auto [full0, full1] = p0_p1(2, r);
    auto [low0, low1] = p0_p1_truncated(2, r, 10);
    for (size_t i = 0; i <= 10; ++i) {
      EXPECT_EQ(low0.coeff(i), full0.coeff(i)) << "r=" << r << " i=" << i;
      EXPECT_EQ(low1.coeff(i), full1.coeff(i)) << "r=" << r << " i=" << i;
    }
  }
}

TEST(ConstCoeffs, KnownValuesAndSum) {
  ConstCoeffs c11 = const_coeffs(1, 1);
  EXPECT_EQ(c11.p0, rat(1, 2));
  EXPECT_EQ(c11.p1, rat(1, 2));
  ConstCoeffs c12 = const_coeffs(1, 2);
  EXPECT_EQ(c12.p0, rat(3, 4));
  for (int t = 1; t <= 3; ++t)
    for (int r = 1; r <= 10; ++r) EXPECT_EQ(const_coeffs(t, r).p0 + const_coeffs(t, r).p1, Rat(1));
}

TEST(ConstCoeffs, MatchesPolynomialConstantTerm) {
  for (int t = 1; t <= 2; ++t) {
    for (int r = 1; r <= 5; ++r) {
      auto [p0, p1] = p0_p1(t, r);
      ConstCoeffs c = const_coeffs(t, r);
      EXPECT_EQ(c.p0, p0.coeff(0));
      EXPECT_EQ(c.p1, p1.coeff(0));
    }
  }
}

TEST(PCoeffs, KnownValues) {
  PCoeffs c11 = p_coeffs(1, 1);
  EXPECT_EQ(c11.p0, rat(-1, 2));
  EXPECT_EQ(c11.p1, rat(-1, 2));
  EXPECT_EQ(p_coeffs(1, 2).p0, rat(-1, 2));
  EXPECT_EQ(p_coeffs(2, 1).p0, rat(-1, 2));  // -t/2^t at t=2
}

TEST(PCoeffs, WithinProvenRange) {
  for (int t = 1; t <= 4; ++t) {
    Rat lo = Rat(-2) * pow2(t);
    for (int r = 1; r <= 20; ++r) {
      PCoeffs c = p_coeffs_recurrence(t, r);
      EXPECT_GE(c.p0, lo);
      EXPECT_LE(c.p0, Rat(0));
      EXPECT_GE(c.p1, lo);
      EXPECT_LE(c.p1, Rat(0));
    }
  }
}

TEST(Identities, AllPass) {
  for (const IdentityCheck& c : identity_suite()) EXPECT_TRUE(c.pass) << c.name;
}

TEST(Identities, SpotValues) {
  // 1/2 + 2/4 + 3/8 == 2 - 5/8
  Rat s = rat(1, 2) + rat(2, 4) + rat(3, 8);
  EXPECT_EQ(s, rat(11, 8));
  EXPECT_EQ(s, Rat(2) - rat(5, 8));
}

}  // namespace
}  // namespace treetribes
