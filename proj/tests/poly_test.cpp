#include "treetribes/poly.hpp"

#include <gtest/gtest.h>

#include "treetribes/rng.hpp"

namespace treetribes {
namespace {

RationalPoly random_poly(SampleRng& rng, int max_degree = 8) {
  std::vector<Rat> c(1 + rng.next() % (max_degree + 1));
  for (auto& x : c) {
    long long num = static_cast<long long>(rng.next() % 41) - 20;
    long long den = 1 + rng.next() % 12;
    x = rat(num, den);
  }
  return RationalPoly(std::move(c));
}

TEST(RationalPoly, CoeffAndTail) {
  RationalPoly q({Rat(1), Rat(2), Rat(3)});  // 1 + 2p + 3p^2
  EXPECT_EQ(q.coeff(1), Rat(2));
  EXPECT_EQ(q.coeff(5), Rat(0));
  EXPECT_EQ(q.tail(1), RationalPoly({Rat(2), Rat(3)}));
  EXPECT_EQ(q.tail(3), RationalPoly());
}

TEST(RationalPoly, ShiftedCoefficientExtraction) {
  SampleRng rng(1, 0);
  for (int it = 0; it < 50; ++it) {
    RationalPoly q = random_poly(rng);
    unsigned j = rng.next() % 4;
    RationalPoly pj = RationalPoly::variable().pow(j);
    RationalPoly shifted = pj * q;
    for (unsigned i = 0; i < 10; ++i) {
      if (j > i)
        EXPECT_EQ(shifted.coeff(i), Rat(0));
      else
        EXPECT_EQ(shifted.coeff(i), q.coeff(i - j));
    }
  }
}

TEST(RationalPoly, OperatorLawsOnRandomPairs) {
  SampleRng rng(2, 0);
  for (int it = 0; it < 50; ++it) {
    RationalPoly q = random_poly(rng), r = random_poly(rng);
    size_t i = rng.next() % 6;
    EXPECT_EQ((q + r).coeff(i), q.coeff(i) + r.coeff(i));
    EXPECT_EQ((q + r).tail(i), q.tail(i) + r.tail(i));
    Rat conv(0);
    for (size_t j = 0; j <= i; ++j) conv += q.coeff(j) * r.coeff(i - j);
    EXPECT_EQ((q * r).coeff(i), conv);
  }
}

TEST(RationalPoly, EvalMatchesHorner) {
  RationalPoly q({rat(1, 2), rat(-1, 3), Rat(2)});
  Rat p = rat(3, 7);
  EXPECT_EQ(q.eval(p), rat(1, 2) - rat(1, 3) * p + Rat(2) * p * p);
}

TEST(Gmax, ConstantAndPureVariable) {
  EXPECT_EQ(gmax(RationalPoly::constant(rat(-5, 3)), 0, Rat(1), 16), rat(5, 3));
  EXPECT_EQ(gmax(RationalPoly::variable(), 1, Rat(1), 16), Rat(1));
  EXPECT_EQ(gmax(RationalPoly(), 2, Rat(1), 16), Rat(0));
}

TEST(Gmax, DominatesTailValues) {
  SampleRng rng(3, 0);
  const Rat p_max = rat(1, 4);
  for (int it = 0; it < 20; ++it) {
    RationalPoly q = random_poly(rng);
    size_t i = rng.next() % 3;
    Rat bound = gmax(q, i, p_max, 32);
    for (int k = 0; k < 50; ++k) {
      uint64_t den = 1 + rng.next() % 997;
      Rat p = Rat(BigInt(rng.next() % (den + 1))) / Rat(BigInt(den)) * p_max;
      EXPECT_LE(abs(q.tail(i).eval(p)), bound);
    }
  }
}

TEST(Gmax, Subadditive) {
  SampleRng rng(4, 0);
  for (int it = 0; it < 25; ++it) {
    RationalPoly q = random_poly(rng), r = random_poly(rng);
    size_t i = rng.next() % 3;
    Rat whole = gmax(q + r, i, rat(1, 2), 24);
    Rat parts = gmax(q, i, rat(1, 2), 24) + gmax(r, i, rat(1, 2), 24);
    EXPECT_LE(whole, parts);
  }
}

TEST(Gmax, RejectsBadArguments) {
  EXPECT_THROW(gmax(RationalPoly::variable(), 0, Rat(1), 1), std::invalid_argument);
  EXPECT_THROW(gmax(RationalPoly::variable(), 0, Rat(2), 8), std::invalid_argument);
}

}  // namespace
}  // namespace treetribes
