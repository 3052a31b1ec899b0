#include <gtest/gtest.h>

#include <bergman/domain.hpp>

using namespace bergman;
using namespace std::complex_literals;

TEST(Phi, Substitution) {
  auto z = phi({0.5, 0.5});
  EXPECT_EQ(z.z1, cplx(1.0));
  EXPECT_EQ(z.z2, cplx(0.25));
  z = phi({0.0, 0.0});
  EXPECT_EQ(z.z1, cplx(0.0));
  EXPECT_EQ(z.z2, cplx(0.0));
}

TEST(Phi, Symmetric) {
  auto a = phi({0.3, -0.1i}), b = phi({-0.1i, 0.3});
  EXPECT_EQ(a.z1, b.z1);
  EXPECT_EQ(a.z2, b.z2);
}

TEST(PhiPreimage, Examples) {
  auto [a, b] = phi_preimage(0.0, 0.0);
  EXPECT_EQ(a, cplx(0.0));
  EXPECT_EQ(b, cplx(0.0));
  auto [c, d] = phi_preimage(1.0, 0.25);
  EXPECT_NEAR(std::abs(c - 0.5), 0, 1e-8);
  EXPECT_NEAR(std::abs(d - 0.5), 0, 1e-8);
}

TEST(PhiPreimage, RootsSolveTheQuadratic) {
  auto [a, b] = phi_preimage(0.0, -0.25);
  for (cplx t : {a, b}) EXPECT_LT(std::abs(t * t - 0.0 * t - 0.25), 1e-15);
  EXPECT_NEAR(std::abs(a), 0.5, 1e-15);
  EXPECT_NEAR(std::abs(a + b), 0, 1e-15);
}

TEST(PhiPreimage, RoundTripWithoutCancellation) {
  for (cplx z1 : {cplx(1e8), cplx(-3, 2), cplx(1e-9, 1e-9)})
    for (cplx z2 : {cplx(1e-8), cplx(0.25), cplx(-2, 1)}) {
      auto [a, b] = phi_preimage(z1, z2);
      auto z = phi({a, b});
      EXPECT_LT(std::abs(z.z1 - z1), 1e-12 * std::max(1.0, std::abs(z1)));
      EXPECT_LT(std::abs(z.z2 - z2), 1e-12 * std::max(1.0, std::abs(z2)));
    }
}

TEST(InG, Examples) {
  EXPECT_TRUE(in_G(0.0, 0.0));
  EXPECT_FALSE(in_G(2.0, 1.0));
  EXPECT_TRUE(in_G(0.0, -0.25));
  EXPECT_FALSE(in_G(0.0, -1.0));
}

TEST(Jacobian, Examples) {
  EXPECT_EQ(jacobian({0.5, 0.5}), cplx(0));
  EXPECT_EQ(std::abs(jacobian({0.5, -0.5})), 1.0);
  BidiskPoint p{0.3, 0.1i};
  auto z = phi(p);
  EXPECT_NEAR(std::norm(jacobian(p)), std::abs(z.z1 * z.z1 - 4.0 * z.z2), 1e-15);
}

TEST(DeltaWeight, Examples) {
  EXPECT_NEAR(delta_weight(phi({0.5, -0.5})), 0, 1e-15);
  EXPECT_THROW(delta_weight(phi({0.5, 0.5})), SingularLocusError);
  EXPECT_NEAR(delta_weight(phi({0.6, 0.2})), -std::log(0.16), 1e-12);
}

TEST(Tent, Contains) {
  EXPECT_TRUE(tent_contains({0.0}, 0.3 - 0.9i));
  EXPECT_TRUE(tent_contains({0.9}, 0.95));
  EXPECT_FALSE(tent_contains({0.9}, 0.0));
  TentSpec t{0.9i};
  EXPECT_NEAR(t.radius(), 0.1, 1e-15);
  EXPECT_NEAR(std::abs(t.apex() - 1.0i), 0, 1e-15);
}

TEST(Tent, Area) {
  EXPECT_DOUBLE_EQ(tent_area({0.0}), pi);
  EXPECT_NEAR(lens_area(1.0), 2 * pi / 3 - std::sqrt(3.0) / 2, 1e-15);
  EXPECT_NEAR(lens_area(1e-3) / 1e-6 / (pi / 2), 1, 0.02);
  double lo = 2 * pi / 3 - std::sqrt(3.0) / 2;
  for (double R = 1; R > 1e-6; R *= 0.7) {
    double r = lens_area(R) / (R * R);
    EXPECT_GE(r, lo * (1 - 1e-12));
    EXPECT_LE(r, pi);
  }
}
