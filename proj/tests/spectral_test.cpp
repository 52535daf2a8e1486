#include "treetribes/spectral.hpp"

#include <gtest/gtest.h>

namespace treetribes {
namespace {

TEST(Jacobsthal, ClosedFormAndRecurrence) {
  EXPECT_EQ(jacobsthal(0), BigInt(0));
  EXPECT_EQ(jacobsthal(1), BigInt(1));
  EXPECT_EQ(jacobsthal(2), BigInt(1));
  EXPECT_EQ(jacobsthal(3), BigInt(3));
  EXPECT_EQ(jacobsthal(4), BigInt(5));
  EXPECT_EQ(jacobsthal(5), BigInt(11));
  for (unsigned i = 2; i <= 64; ++i)
    EXPECT_EQ(jacobsthal(i), jacobsthal(i - 1) + 2 * jacobsthal(i - 2)) << i;
}

TEST(ClosedT1, KnownValues) {
  EXPECT_EQ(fourier_t1_closed(3, 0b001), rat(3, 4));   // {x0}: J3 / 4
  EXPECT_EQ(fourier_t1_closed(3, 0b011), rat(1, 4));   // {x0,x1}: J2 / 4
  EXPECT_EQ(fourier_t1_closed(3, 0b100), rat(1, 4));   // {x2}: J1 / 4
}

TEST(ClosedT1, MatchesTransformWithSign) {
  for (int n : {3, 5}) {
    FourierSpectrum s = fourier_transform(to_truth_table(build_xor_tribe(1, n).tree));
    for (uint64_t mask = 1; mask < (uint64_t(1) << n); ++mask)
      EXPECT_EQ(fourier_t1_closed(n, mask), s.at(mask)) << "n=" << n << " S=" << mask;
  }
}

TEST(ClosedT1, RefusesEvenWidth) {
  EXPECT_THROW(fourier_t1_closed(4, 1), std::domain_error);
  EXPECT_THROW(fourier_t1_closed(3, 0), std::invalid_argument);
  EXPECT_THROW(fourier_t1_closed(3, 0b1000), std::invalid_argument);
}

TEST(OnPath, ChainAndSiblings) {
  TribeTree tribe = build_xor_tribe(2, 2);
  // x0 -> x1 chain at level 1; x2,x3 block under x0; x4,x5 block under x1
  EXPECT_TRUE(on_path_params(tribe, 0b000011).has_value());
  EXPECT_TRUE(on_path_params(tribe, 0b000101).has_value());
  EXPECT_FALSE(on_path_params(tribe, 0b010100).has_value());  // {x2, x4}
  EXPECT_FALSE(on_path_params(tribe, 0b000110).has_value());  // {x1, x2}
  EXPECT_THROW(on_path_params(tribe, 1 << 10), std::invalid_argument);
}

TEST(GeneralClosed, RootCoefficient) {
  TribeTree tribe = build_xor_tribe(2, 3);
  ClosedCoeff c = fourier_general_closed(tribe, 1);  // S = {root}, k=2, d=0, l=1
  ASSERT_FALSE(c.zero);
  // 2^{1-k-d} (1 - beta^3) / (2 - alpha) with alpha = 1/4, beta = -3/4
  Rat expected = rat(1, 2) * (Rat(1) - rat_pow(rat(-3, 4), 3)) / (Rat(2) - rat(1, 4));
  EXPECT_EQ(c.magnitude, expected);
  EXPECT_EQ(c.magnitude, rat(13, 32));
  FourierSpectrum s = fourier_transform(to_truth_table(tribe.tree));
  EXPECT_EQ(abs(s.at(1)), c.magnitude);
}

TEST(GeneralClosed, OffPathIsZeroInTransform) {
  TribeTree tribe = build_xor_tribe(2, 2);
  FourierSpectrum s = fourier_transform(to_truth_table(tribe.tree));
  ClosedCoeff c = fourier_general_closed(tribe, 0b010100);
  EXPECT_TRUE(c.zero);
  EXPECT_EQ(s.at(0b010100), Rat(0));
}

TEST(GeneralClosed, MagnitudesMatchOnSmallTribe) {
  TribeTree tribe = build_xor_tribe(2, 2);
  FourierSpectrum s = fourier_transform(to_truth_table(tribe.tree));
  for (uint64_t mask = 1; mask < (uint64_t(1) << 6); ++mask) {
    ClosedCoeff c = fourier_general_closed(tribe, mask);
    if (c.zero)
      EXPECT_EQ(s.at(mask), Rat(0)) << mask;
    else
      EXPECT_EQ(abs(s.at(mask)), c.magnitude) << mask;
  }
}

TEST(BiasClosed, MatchesTableAndLimits) {
  EXPECT_EQ(bias_closed(2, 3), bias(to_truth_table(build_xor_tribe(2, 3).tree)));
  // single level is plain OR
  for (int t = 1; t <= 5; ++t)
    EXPECT_EQ(bias_closed(t, 1), abs(pow2(-t) - rat(1, 2)));
  // the single-clip limit approaches 1/6
  EXPECT_LT(abs(bias_closed(1, 101) - rat(1, 6)), pow2(-50));
}

}  // namespace
}  // namespace treetribes
