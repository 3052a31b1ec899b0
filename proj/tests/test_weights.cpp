#include <gtest/gtest.h>

#include <bergman/bekolle_bonami.hpp>
#include <bergman/weights.hpp>

using namespace bergman;
using namespace std::complex_literals;

TEST(Eval, Examples) {
  EXPECT_EQ(eval(0.3i, WeightSpec::constant(1)), 1.0);
  EXPECT_DOUBLE_EQ(eval(0.0, WeightSpec::pair_power(2, 0.5)), 0.25);
  EXPECT_NEAR(eval(BidiskPoint{0.6, 0.2}, WeightSpec::pullback_delta(1.5)), 0.064, 1e-15);
  EXPECT_EQ(eval(0.5, WeightSpec::pair_power(-1, 0.5)), inf);
}

TEST(Eval, PullbackMatchesDelta) {
  BidiskPoint b{0.6, 0.2};
  double l = 1.5;
  EXPECT_NEAR(eval(b, WeightSpec::pullback_delta(l)), std::exp(-l * delta_weight(phi(b))), 1e-14);
}

TEST(Eval, SobolevTargetExponent) {
  auto s = WeightSpec::sobolev_target(1, 3);
  EXPECT_EQ(s.bidisk_exponent(), 9);
  BidiskPoint b{0.6, 0.2};
  EXPECT_NEAR(eval(b, s), std::pow(0.4, 9), 1e-18);
}

TEST(Dual, Examples) {
  auto d = dual_weight(WeightSpec::pair_power(2, 0.5), 3);
  EXPECT_EQ(d.family, WeightFamily::pair_power);
  EXPECT_EQ(d.s, -1);
  EXPECT_EQ(d.w2, cplx(0.5));
  auto e = dual_weight(WeightSpec::pair_power(2, 0.5, -1), 2);
  EXPECT_EQ(e.s, 0);
  EXPECT_NEAR(dual_weight(WeightSpec::constant(4), 3).c, 0.5, 1e-15);
  EXPECT_THROW(dual_weight(WeightSpec::constant(4), 1), std::invalid_argument);
}

TEST(Dual, InvolutionOfExponents) {
  auto s = WeightSpec::pair_power(2, 0.5);
  auto d = dual_weight(dual_weight(s, 3), 1.5);
  EXPECT_DOUBLE_EQ(d.s, 2);
}

TEST(Dual, BpInvolution) {
  WeightSpec s = WeightSpec::pair_power(2, 0.5);
  for (TentSpec t : {TentSpec{0.0}, TentSpec{0.6}, TentSpec{0.45 + 0.01i}, TentSpec{0.2i}}) {
    double a = bp_quotient(s, 3, t), b = bp_quotient(dual_weight(s, 3), 1.5, t);
    EXPECT_NEAR(a / (b * b), 1, 1e-10);
  }
}

TEST(Parse, Forms) {
  auto a = parse_weight("constant:2");
  EXPECT_EQ(a.family, WeightFamily::constant);
  EXPECT_EQ(a.c, 2);
  auto b = parse_weight("pair_power:2-p:0.5:0");
  EXPECT_TRUE(b.p_dependent());
  EXPECT_EQ(b.exponent(3), -1);
  EXPECT_EQ(b.w2, cplx(0.5));
  auto c = parse_weight("pair_power:-1:0:0.9");
  EXPECT_EQ(c.s, -1);
  EXPECT_EQ(c.w2, cplx(0, 0.9));
  EXPECT_EQ(parse_weight("pullback_delta:4.5").l, 4.5);
  EXPECT_EQ(parse_weight("sobolev_target:1:3").k, 1);
  EXPECT_THROW(parse_weight("pair_power"), std::invalid_argument);
  EXPECT_THROW(parse_weight("banana:1"), std::invalid_argument);
  EXPECT_THROW(parse_weight("constant:-1"), std::invalid_argument);
}

TEST(Gate, TentIntegrals) {
  TentSpec t{0.8};
  cplx w2 = t.apex();
  EXPECT_THROW(tent_average(WeightSpec::pair_power(-2, w2), t), NonIntegrableError);
  EXPECT_TRUE(std::isfinite(tent_average(WeightSpec::pair_power(-1.99, w2), t)));
  auto f = WeightSpec::pair_power(2, w2, -1);
  EXPECT_EQ(bp_quotient(f, 4.0 / 3.0, t), inf);
  EXPECT_TRUE(std::isfinite(bp_quotient(f, 1.4, t)));
}
