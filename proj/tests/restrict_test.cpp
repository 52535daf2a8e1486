#include "treetribes/restrict.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "treetribes/random_trees.hpp"
#include "treetribes/tribes.hpp"

namespace treetribes {
namespace {

TEST(Law, RejectsOutOfRange) {
  EXPECT_THROW(RestrictionLaw(rat(-1, 2)), std::invalid_argument);
  EXPECT_THROW(RestrictionLaw(rat(3, 2)), std::invalid_argument);
}

TEST(Sampling, DegenerateRates) {
  SampleRng rng(1, 0);
  Restriction none = sample(RestrictionLaw(Rat(0)), 1000, rng);
  EXPECT_EQ(none.star_count(), 0);
  Restriction all = sample(RestrictionLaw(Rat(1)), 1000, rng);
  EXPECT_EQ(all.star_count(), 1000);
}

TEST(Sampling, StarFractionConcentrates) {
  const size_t n = 100000;
  SampleRng rng(42, 0);
  Restriction rho = sample(RestrictionLaw(rat(1, 3)), n, rng);
  double frac = static_cast<double>(rho.star_count()) / n;
  double sigma = std::sqrt((1.0 / 3) * (2.0 / 3) / n);
  EXPECT_NEAR(frac, 1.0 / 3, 5 * sigma);
  // fixed values are split evenly between 0 and 1
  size_t ones = 0, fixed = 0;
  for (Cell c : rho.cells) {
    fixed += c != Cell::Star;
    ones += c == Cell::One;
  }
  double one_frac = static_cast<double>(ones) / fixed;
  EXPECT_NEAR(one_frac, 0.5, 5 * std::sqrt(0.25 / fixed));
}

TEST(Enumeration, SingleLevelTribe) {
  P01Polys polys = enumerate_p0p1(build_xor_tribe(1, 1).tree);
  EXPECT_EQ(polys.p0, RationalPoly::half_one_minus_p());
  EXPECT_EQ(polys.p1, RationalPoly::half_one_minus_p());
  EXPECT_EQ(polys.pstar, RationalPoly::variable());
}

TEST(Enumeration, TwoLevelTribe) {
  P01Polys polys = enumerate_p0p1(build_xor_tribe(1, 2).tree);
  // q + q^2 + p q with q = (1-p)/2
  EXPECT_EQ(polys.p0, RationalPoly({rat(3, 4), rat(-1, 2), rat(-1, 4)}));
}

TEST(Enumeration, ClassesPartitionUnity) {
  for (int it = 0; it < 8; ++it) {
    SampleRng rng(5, it);
    DecisionTree tree = random_tree(rng, 6, 4);
    if (!tree.read_once || tree.is_single_leaf()) continue;
    P01Polys polys = enumerate_p0p1(tree);
    EXPECT_EQ(polys.p0 + polys.p1 + polys.pstar, RationalPoly::constant(Rat(1)));
    for (int k = 0; k <= 8; ++k) {
      Rat p = rat(k, 8);
      EXPECT_GE(polys.p0.eval(p), Rat(0));
      EXPECT_GE(polys.p1.eval(p), Rat(0));
      EXPECT_GE(polys.pstar.eval(p), Rat(0));
    }
  }
}

TEST(Enumeration, GenericClassifierAgrees) {
  DecisionTree tree = build_xor_tribe(1, 2).tree;
  auto classes = enumerate_exact(tree, [](const DecisionTree& restricted, const Restriction&) {
    switch (constness(to_truth_table(restricted, restricted.var_count))) {
      case Constness::Const0: return "c0";
      case Constness::Const1: return "c1";
      default: return "split";
    }
  });
  P01Polys polys = enumerate_p0p1(tree);
  EXPECT_EQ(classes.at("c0"), polys.p0);
  EXPECT_EQ(classes.at("c1"), polys.p1);
  EXPECT_EQ(classes.at("split"), polys.pstar);
}

TEST(Enumeration, CapEnforcedAndOverridable) {
  DecisionTree big = build_xor_tribe(1, 13).tree;
  EXPECT_THROW(enumerate_p0p1(big), resource_limit_error);
  EXPECT_NO_THROW(enumerate_p0p1(big, 13));
}

TEST(MonteCarlo, DegenerateCases) {
  DecisionTree tree = build_xor_tribe(2, 2).tree;
  EstimateReport d0 = mc_estimate_depth_ge(tree, RestrictionLaw(rat(1, 2)), 0, 1000);
  EXPECT_EQ(d0.phat, Rat(1));
  EstimateReport p0 = mc_estimate_depth_ge(tree, RestrictionLaw(Rat(0)), 1, 1000);
  EXPECT_EQ(p0.phat, Rat(0));
}

TEST(MonteCarlo, DeterministicAcrossWorkerCounts) {
  DecisionTree tree = build_xor_tribe(2, 2).tree;
  RestrictionLaw law(rat(1, 4));
  EstimateReport serial = mc_estimate_depth_ge(tree, law, 1, 20000, 123, kDepthSearchCap,
                                               OvercapPolicy::Report, 1);
  EstimateReport threaded = mc_estimate_depth_ge(tree, law, 1, 20000, 123, kDepthSearchCap,
                                                 OvercapPolicy::Report, 3);
  EXPECT_EQ(serial.successes, threaded.successes);
  EXPECT_EQ(serial.skipped_overcap, threaded.skipped_overcap);
  EXPECT_EQ(serial.phat, threaded.phat);
  EstimateReport again = mc_estimate_depth_ge(tree, law, 1, 20000, 123);
  EXPECT_EQ(serial.successes, again.successes);
}

TEST(MonteCarlo, MatchesExactConstantZeroProbability) {
  for (int it = 0; it < 6; ++it) {
    SampleRng rng(6, it);
    DecisionTree tree = random_tree(rng, 8, 4);
    if (tree.is_single_leaf() || !tree.read_once) continue;
    P01Polys polys = enumerate_p0p1(tree, 10);
    for (const Rat& p : {rat(1, 4), rat(1, 2)}) {
      EstimateReport rep = mc_estimate_constant(tree, RestrictionLaw(p), 0, 20000, 99 + it);
      double exact = to_double(polys.p0.eval(p));
      EXPECT_LE(std::abs(to_double(rep.phat) - exact),
                4 * rep.standard_error + 1e-12)
          << "tree " << it << " p=" << to_double(p);
    }
  }
}

TEST(MonteCarlo, OvercapPolicies) {
  DecisionTree tree = build_xor_tribe(1, 6).tree;
  RestrictionLaw law(Rat(1));  // everything starred: 6 live > cap 2
  EstimateReport rep = mc_estimate_depth_ge(tree, law, 2, 100, 7, /*live_cap=*/2,
                                            OvercapPolicy::Report);
  EXPECT_EQ(rep.skipped_overcap, 100u);
  EXPECT_EQ(rep.phat, Rat(0));
  EstimateReport up = mc_estimate_depth_ge(tree, law, 2, 100, 7, 2, OvercapPolicy::AsSuccess);
  EXPECT_EQ(up.phat, Rat(1));
  EstimateReport down = mc_estimate_depth_ge(tree, law, 2, 100, 7, 2, OvercapPolicy::AsFailure);
  EXPECT_EQ(down.phat, Rat(0));
  EXPECT_EQ(down.skipped_overcap, 100u);
}

TEST(Csv, RowFormat) {
  EstimateReport rep;
  rep.samples = 10;
  rep.successes = 5;
  rep.phat = rat(1, 2);
  rep.standard_error = 0.5;
  rep.seed = 7;
  EXPECT_EQ(csv_header(), "t,r,p_num,p_den,d,samples,successes,phat,stderr,skipped,seed");
  EXPECT_EQ(csv_row(1, 2, rat(1, 3), 1, rep), "1,2,1,3,1,10,5,0.5,0.5,0,7");
}

}  // namespace
}  // namespace treetribes
