#include <gtest/gtest.h>

#include <bergman/kernels.hpp>

using namespace bergman;
using namespace std::complex_literals;

TEST(DiskKernel, Examples) {
  EXPECT_NEAR(std::abs(disk_kernel(0.0, 0.7 - 0.2i) - 1 / pi), 0, 1e-15);
  EXPECT_NEAR(std::abs(disk_kernel(0.5, 0.5, {false}) - 16.0 / 9.0), 0, 1e-14);
  cplx w = 0.3 + 0.2i, e = -0.5i;
  EXPECT_NEAR(std::abs(disk_kernel(w, e) - std::conj(disk_kernel(e, w))), 0, 1e-15);
}

TEST(GKernel, OriginValue) { EXPECT_NEAR(std::abs(g_kernel({0, 0}, {0, 0}) - 1 / (pi * pi)), 0, 1e-15); }

TEST(GKernel, RootSwapAndHermitian) {
  GPoint z{0.8, 0.1}, zeta{0.2, -0.05};
  auto [w1, w2] = phi_preimage(z);
  auto [e1, e2] = phi_preimage(zeta);
  cplx g = g_kernel(z, zeta);
  EXPECT_NEAR(std::abs(g_kernel_preimages(w2, w1, e1, e2) - g), 0, 1e-13 * std::abs(g));
  EXPECT_NEAR(std::abs(g_kernel_preimages(w1, w2, e2, e1) - g), 0, 1e-13 * std::abs(g));
  EXPECT_NEAR(std::abs(g_kernel(zeta, z) - std::conj(g)), 0, 1e-13 * std::abs(g));
}

TEST(GKernel, FactoredMatchesQuotient) {
  cplx w1 = 0.3 + 0.1i, w2 = -0.4, e1 = 0.2i, e2 = 0.6 - 0.1i;
  cplx a = g_kernel_preimages(w1, w2, e1, e2), b = g_kernel_quotient(w1, w2, e1, e2);
  EXPECT_NEAR(std::abs(a - b), 0, 1e-12 * std::abs(a));
}

TEST(GKernel, DiagonalIsFinite) {
  cplx g = g_kernel_preimages(0.4, 0.4, 0.4, 0.4);
  EXPECT_TRUE(std::isfinite(g.real()));
  cplx h = g_kernel_preimages(0.4, 0.4 + 1e-7, 0.4, 0.4 - 1e-7);
  EXPECT_NEAR(std::abs(g - h), 0, 1e-5 * std::abs(g));
}

TEST(PartialKernel, Examples) {
  cplx w = 0.3 - 0.4i, e = 0.7i;
  EXPECT_NEAR(std::abs(partial_kernel(0, w, e) - disk_kernel(w, e, {false})), 0, 1e-15);
  EXPECT_EQ(partial_kernel(1, 0.0, e), cplx(0));
  EXPECT_NEAR(std::abs(partial_kernel(2, 0.5, 0.6) - partial_kernel_series(2, 0.5, 0.6)), 0, 1e-12);
}

TEST(PartialKernel, ClosedFormMatchesSeries) {
  for (int b = 0; b <= 5; ++b)
    for (double r1 = 0; r1 <= 0.9; r1 += 0.15)
      for (double r2 = 0; r2 <= 0.9; r2 += 0.15)
        for (int j = 0; j < 7; ++j) {
          cplx w = std::polar(r1, 0.9 * j), e = std::polar(r2, -0.4 * j);
          EXPECT_LT(std::abs(partial_kernel(b, w, e) - partial_kernel_series(b, w, e)), 1e-10);
        }
}

TEST(KernelDerivative, Examples) {
  cplx w = 0.3 - 0.4i, e = 0.7i;
  EXPECT_EQ(kernel_w_derivative(0, w, e), disk_kernel(w, e, {false}));
  EXPECT_NEAR(std::abs(kernel_w_derivative(1, 0.5, 0.5) - 64.0 / 27.0), 0, 1e-14);
}

TEST(KernelDerivative, TransferIdentity) {
  cplx w = 0.3 + 0.1i, e = -0.4;
  for (int b = 1; b <= 3; ++b) {
    cplx l = kernel_w_derivative(b, w, e), r = ipow(std::conj(e) / w, b) * kernel_etabar_derivative(b, w, e);
    EXPECT_LT(std::abs(l - r) / std::abs(l), 1e-8);
  }
}

TEST(KernelDerivative, FiniteDifference) {
  cplx w = 0.2 + 0.3i, e = -0.5 + 0.1i, h = 1e-5;
  for (int b = 0; b <= 3; ++b) {
    cplx fd = (kernel_w_derivative(b, w + h, e) - kernel_w_derivative(b, w - h, e)) / (2.0 * h);
    EXPECT_LT(std::abs(fd - kernel_w_derivative(b + 1, w, e)) / std::abs(fd), 1e-8);
  }
}

TEST(KernelBound, Sweep) {
  for (int b = 0; b <= 3; ++b) {
    double mx = 0;
    for (int i = 0; i < 50; ++i)
      for (int j = 0; j < 50; ++j) {
        cplx w = std::polar(0.99 * i / 49, 0.37 * j), e = std::polar(0.99 * j / 49, -1.3 * i);
        mx = std::max(mx, kernel_bound_check(b, w, e));
      }
    if (b == 0) EXPECT_DOUBLE_EQ(mx, 1.0);
    EXPECT_LE(mx, 2 * b + 1);
  }
}
