#include "treetribes/bounds.hpp"

#include <gtest/gtest.h>

#include "treetribes/tribes.hpp"

namespace treetribes {
namespace {

TEST(UpperBound, Arithmetic) {
  EXPECT_EQ(upper_bound_value(rat(1, 7), 3, 0), Rat(1));
  EXPECT_EQ(upper_bound_value(rat(1, 64), 2, 3), rat(1, 64));
  EXPECT_EQ(upper_bound_value(Rat(0), 2, 2), Rat(0));
}

TEST(LowerBound, ValueAndDomain) {
  BoundConstants consts;
  EXPECT_EQ(lower_bound_value(rat(1, 7), 3, 0), Rat(1));
  EXPECT_EQ(lower_bound_value(rat(1, 840), 1, 1), rat(1, 17640));
  // boundary rate accepted; level budget kicks in at 4 * 2^t * d
  EXPECT_TRUE(lower_bound_in_domain(consts.p_max(1), 1, 1, 8));
  EXPECT_FALSE(lower_bound_in_domain(consts.p_max(1), 1, 1, 7));
  EXPECT_FALSE(lower_bound_in_domain(consts.p_max(1) * 2, 1, 1, 100));
  EXPECT_TRUE(lower_bound_in_domain(consts.p_max(1), 1, 0, 0));
  EXPECT_EQ(levels_from_vars(2, num_vars(2, 5)), 5);
  EXPECT_EQ(levels_from_vars(1, BigInt(9)), 9);
}

TEST(UKernel, FrozenValueAndMonotonicity) {
  EXPECT_EQ(u_kernel(Rat(0), 1, Rat(4)), rat(1, 4));
  for (int t = 1; t <= 6; ++t) {
    Rat prev = u_kernel(Rat(0), t, Rat(4));
    EXPECT_LE(prev, Rat(1));
    for (int k = 1; k < 16; ++k) {
      Rat u = u_kernel(rat(k, 16), t, Rat(4));
      EXPECT_LE(u, prev) << "t=" << t << " k=" << k;  // decreasing in p
      prev = u;
    }
  }
  EXPECT_THROW(u_kernel(Rat(1), 2, Rat(4)), std::domain_error);
}

TEST(UKernel, DiagonalIdentity) {
  EXPECT_TRUE(u_kernel_diagonal_identity(rat(1, 5), 3, Rat(4)));
  EXPECT_TRUE(u_kernel_diagonal_identity(Rat(0), 1, Rat(4)));
  EXPECT_TRUE(u_kernel_diagonal_identity(rat(7, 13), 5, Rat(4)));
}

TEST(GFunction, BaseAndBudgetedValues) {
  EXPECT_EQ(g_function(1, 1), Rat(-1));
  EXPECT_LE(g_function(1, 8), -pow2(1) / 6);
  EXPECT_LE(g_function(2, 16), -pow2(2) / 6);
}

TEST(G2, SmallCasesPass) {
  for (int r = 1; r <= 12; ++r) {
    G2Result res = g2_check(1, r);
    EXPECT_TRUE(res.pass) << "r=" << r;
    EXPECT_EQ(res.high_tail, Rat(0)) << "truncation covers the whole polynomial";
  }
  G2Result big = g2_check(2, 9);
  EXPECT_TRUE(big.pass);
  EXPECT_GT(big.high_tail, Rat(0));
  EXPECT_LT(big.high_tail, rat(1, 1000000));
}

TEST(D1, SandwichAcrossInDomainLevels) {
  // every single-clip tribe that fits a table and clears the level budget
  BoundConstants consts;
  for (int r = 8; r <= 14; ++r) {
    for (const Rat& p : {Rat(consts.p_max(1) / 2), consts.p_max(1)}) {
      ASSERT_TRUE(lower_bound_in_domain(p, 1, 1, r));
      ScaledP01 v = p01_values(1, r, p);
      EXPECT_GE(v.compare_pstar(Rat(consts.c0 * p * 2)), 0) << "r=" << r;
      EXPECT_LE(v.compare_pstar(Rat(Rat(4) * p * 2)), 0) << "r=" << r;
    }
  }
}

TEST(D1, ExactChecks) {
  D1Result a = d1_check(1, 8, rat(1, 840));
  EXPECT_TRUE(a.in_domain);
  EXPECT_TRUE(a.pass);
  D1Result b = d1_check(2, 16, rat(1, 1680));
  EXPECT_TRUE(b.in_domain);
  EXPECT_TRUE(b.pass);
  D1Result zero = d1_check(1, 8, Rat(0));
  EXPECT_TRUE(zero.pass);  // both sides vanish
  D1Result out = d1_check(1, 8, rat(1, 2));
  EXPECT_FALSE(out.in_domain);  // reported, not asserted
}

TEST(GammaTable, BaseRowIsExactSplitProbability) {
  const Rat p = rat(1, 840);
  LowerBoundTable tab = gamma_lower_table(1, p, 2, 8);
  for (int r = 1; r <= 8; ++r) EXPECT_EQ(tab.L[1][r], p_star_value(1, r, p));
  EXPECT_EQ(tab.L[2][0], Rat(0));
}

TEST(GammaTable, EntriesAreProbabilityBoundsAndMonotone) {
  const Rat p = rat(1, 840);
  LowerBoundTable tab = gamma_lower_table(1, p, 3, 32);
  for (int d = 1; d <= 3; ++d) {
    for (int r = 0; r <= 32; ++r) {
      EXPECT_GE(tab.L[d][r], Rat(0));
      EXPECT_LE(tab.L[d][r], Rat(1));
      if (r > 0) EXPECT_GE(tab.L[d][r], tab.L[d][r - 1]) << "d=" << d << " r=" << r;
    }
  }
  // certifies the squared bound by r = 24
  EXPECT_GE(tab.L[2][24], lower_bound_value(p, 1, 2));
}

TEST(GammaTable, SoundAgainstExactEnumeration) {
  // every entry must sit at or below the true probability, computed here by
  // brute force over all restrictions
  for (auto [t, r_max] : {std::pair{1, 4}, std::pair{2, 2}}) {
    TribeTree tribe = build_xor_tribe(t, r_max);
    for (const Rat& p : {rat(1, 8), rat(1, 64), rat(1, 840)}) {
      LowerBoundTable tab = gamma_lower_table(t, p, 2, r_max);
      for (int r = 1; r <= r_max; ++r) {
        DecisionTree tree = build_xor_tribe(t, r).tree;
        auto classes = enumerate_exact(
            tree, [](const DecisionTree& restricted, const Restriction&) {
              return restricted_dt_depth(restricted, all_star(restricted.var_count)) >= 2
                         ? "ge2"
                         : "lt2";
            });
        Rat exact = classes.count("ge2") ? classes.at("ge2").eval(p) : Rat(0);
        EXPECT_LE(tab.L[2][r], exact) << "t=" << t << " r=" << r << " p=" << to_double(p);
      }
    }
  }
}

TEST(GammaTable, TransferMonotoneInPluggedBound) {
  // the d-step transfer, evaluated directly: larger plugged-in bound gamma
  // (smaller mu) never decreases the output
  const Rat p = rat(1, 64);
  for (int t = 1; t <= 3; ++t) {
    Rat q = (Rat(1) - p) / 2;
    auto transfer = [&](const Rat& gamma_prev) {
      Rat mu = Rat(1) - gamma_prev;
      Rat a(0);
      for (int k = 1; k <= t - 1; ++k)
        for (int i = 1; i <= k; ++i)
          a += q * Rat(binomial(k, i)) * rat_pow(q, k - i) * rat_pow(p, i) *
               (Rat(1) - rat_pow(mu, i + 1));
      Rat b(0);
      for (int i = 0; i <= t; ++i)
        b += Rat(binomial(t, i)) * rat_pow(q, t - i) * rat_pow(p, i) *
             (Rat(1) - rat_pow(mu, i));
      return a + b;
    };
    Rat prev = transfer(Rat(0));
    for (int k = 1; k <= 8; ++k) {
      Rat cur = transfer(rat(k, 8));
      EXPECT_GE(cur, prev) << "t=" << t << " k=" << k;
      prev = cur;
    }
  }
}

TEST(Empirical, ConstantTreeNeverViolates) {
  DecisionTree leaf = DecisionTree::single_leaf(0);
  EmpiricalBound res = empirical_bound_check(leaf, 1, rat(1, 4), 1, 2000, 5);
  EXPECT_EQ(res.est.phat, Rat(0));
  EXPECT_TRUE(res.ub_ok);
}

TEST(Empirical, TribeSandwich) {
  TribeTree tribe = build_xor_tribe(1, 8);
  EmpiricalBound res =
      empirical_bound_check(tribe.tree, 1, rat(1, 840), 1, 100000, 17, /*tribe_levels=*/8);
  EXPECT_TRUE(res.in_domain);
  EXPECT_TRUE(res.ub_ok);
  EXPECT_TRUE(res.lb_ok);
}

}  // namespace
}  // namespace treetribes
