#include <gtest/gtest.h>

#include <bergman/bekolle_bonami.hpp>

using namespace bergman;
using namespace std::complex_literals;

TEST(TentAverage, Constant) {
  EXPECT_EQ(tent_average(WeightSpec::constant(3.5), TentSpec{0.7i}), 3.5);
}

TEST(TentAverage, WholeDisk) {
  EXPECT_NEAR(tent_average(WeightSpec::pair_power(2, 0), TentSpec{0.0}), 0.5, 1e-12);
}

TEST(TentAverage, MatchesIndicatorIntegral) {
  // |w - w2|^2 is smooth, so a fine box grid is an independent oracle
  TentSpec t{0.6 + 0.2i};
  cplx w2 = 0.1 - 0.3i, a = t.apex();
  double R = t.radius();
  int n = 1500;
  double s = 0, area = 0, h = 2 * R / n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cplx w = a + cplx(-R + (i + 0.5) * h, -R + (j + 0.5) * h);
      if (in_disk(w) && tent_contains(t, w)) {
        s += std::norm(w - w2);
        area += 1;
      }
    }
  EXPECT_NEAR(tent_average(WeightSpec::pair_power(2, w2), t), s / area, 1e-3 * s / area);
}

TEST(TentAverage, FarTentEnvelope) {
  TentSpec t{0.99};
  double R = t.radius();
  cplx w2 = -0.3;
  double v = tent_average(WeightSpec::pair_power(2, w2), t);
  double L = std::abs(w2 - t.apex());
  ASSERT_GE(L, 10 * R);
  EXPECT_GE(v, (L - R) * (L - R));
  EXPECT_LE(v, (L + R) * (L + R));
}

TEST(Quotient, ConstantIsOne) {
  EXPECT_EQ(bp_quotient(WeightSpec::constant(5), 3, TentSpec{0.4}), 1);
  EXPECT_EQ(bp_constant(WeightSpec::constant(5), 1.7, make_tent_grid(0.5, 1e-2)).value, 1);
}

TEST(Quotient, FarTentsUnderCeiling) {
  cplx w2 = 0.2;
  for (TentSpec t : {TentSpec{0.99}, TentSpec{-0.995i}, TentSpec{0.97 * std::polar(1.0, 2.0)}}) {
    ASSERT_EQ(regime_classify(t, w2), Regime::far);
    EXPECT_LE(bp_quotient(WeightSpec::pair_power(2, w2), 3, t), std::pow(11.0 / 9.0, 2));
    EXPECT_LE(bp_quotient(WeightSpec::pair_power(2, w2, -1), 1.5, t), std::pow(11.0 / 9.0, 0.5));
  }
}

TEST(Quotient, JensenFloor) {
  for (TentSpec t : {TentSpec{0.0}, TentSpec{0.5}, TentSpec{0.9 + 0.05i}, TentSpec{0.999}})
    for (double p : {1.5, 2.0, 3.0})
      EXPECT_GE(bp_quotient(WeightSpec::pair_power(0.8, 0.9), p, t), 1 - 1e-12);
}

TEST(Grid, ContainsOriginAndTargetedTents) {
  auto g = make_tent_grid(0.9, 1e-3, 0);
  EXPECT_TRUE(g.tents.front().whole());
  double rmin = 1;
  bool aimed = false;
  for (auto& t : g.tents) {
    rmin = std::min(rmin, t.radius());
    if (!t.whole() && std::abs(t.apex() - 1.0) < 1e-12 && std::abs(t.radius() - 0.1 / 8) < 1e-12) aimed = true;
  }
  EXPECT_GE(rmin, 1e-3 * (1 - 1e-12));
  EXPECT_LT(rmin, 1.5e-3);
  EXPECT_TRUE(aimed);
  EXPECT_GT(make_tent_grid(0.9, 1e-3, 1).tents.size(), g.tents.size());
}

TEST(Estimate, DeterministicArgmax) {
  auto g = make_tent_grid(0.5, 1e-2, 0);
  auto a = bp_constant(WeightSpec::pair_power(2, 0.5), 3, g), b = bp_constant(WeightSpec::pair_power(2, 0.5), 3, g);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.argmax_index, b.argmax_index);
  EXPECT_EQ(a.rows.size(), g.tents.size());
}

TEST(Estimate, RefinementStable) {
  auto e = bp_refine(WeightSpec::pair_power(2, 0.5), 3, 0.5, 1e-3, 2);
  ASSERT_EQ(e.history.size(), 2u);
  EXPECT_TRUE(std::isfinite(e.value));
  EXPECT_LT(std::abs(e.history[1] - e.history[0]) / e.history[1], 0.05);
}

TEST(Regime, Examples) {
  EXPECT_EQ(regime_classify(TentSpec{0.99}, 0.0), Regime::far);
  EXPECT_EQ(regime_classify(TentSpec{0.99}, 0.995), Regime::near_small);
  EXPECT_EQ(regime_classify(TentSpec{0.3}, 0.5), Regime::near_large);
  EXPECT_EQ(regime_classify(TentSpec{0.0}, 0.5), Regime::near_large);
}

TEST(RegimeBound, Examples) {
  EXPECT_NEAR(regime_bound(WeightSpec::pair_power(2, 0), 3, Regime::far), std::pow(11.0 / 9.0, 2), 1e-15);
  EXPECT_NEAR(regime_bound(WeightSpec::pair_power(2, 0, -1), 3, Regime::far), 11.0 / 9.0, 1e-15);
  EXPECT_EQ(regime_bound(WeightSpec::pair_power(2, 0), 2, Regime::near_small), inf);
  EXPECT_TRUE(std::isfinite(regime_bound(WeightSpec::pair_power(2, 0), 3, Regime::near_small)));
  EXPECT_THROW(regime_bound(WeightSpec::pair_power(1, 0), 3, Regime::far), std::invalid_argument);
}

TEST(RegimeBound, HoldsOnGrid) {
  cplx w2 = 0.9i;
  for (auto [sp, p] : {std::pair{WeightSpec::pair_power(2, w2), 3.0}, std::pair{WeightSpec::pair_power(2, w2, -1), 3.9}}) {
    auto e = bp_constant(sp, p, make_tent_grid(w2, 1e-3));
    for (auto& r : e.rows)
      if (!r.empty) EXPECT_LE(r.quotient, 1.05 * regime_bound(sp, p, regime_classify(r.tent, w2)));
  }
}

TEST(Sharpness, OutsideRangeGrows) {
  auto sh = sharpness_ladder(WeightSpec::pair_power(2, 0.5, -1), 4.5, 0.5, {1e-1, 1e-2, 1e-3});
  EXPECT_TRUE(sh.exact_infinite);
  EXPECT_GE(sh.growth, 10);
  EXPECT_TRUE(std::is_sorted(sh.running_max.begin(), sh.running_max.end()));
}

TEST(Sharpness, InsideRangeFlat) {
  auto sh = sharpness_ladder(WeightSpec::pair_power(2, 0.5), 3, 0.5, {1e-1, 1e-2, 1e-3});
  EXPECT_FALSE(sh.exact_infinite);
  EXPECT_LT(sh.growth, 1.5);
  EXPECT_FALSE(sh.diverging);
}
