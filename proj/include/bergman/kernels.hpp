#pragma once

#include <cmath>

#include "domain.hpp"

namespace bergman {

struct KernelConvention {
  bool normalized = true;
};

inline cplx disk_kernel(cplx w, cplx eta, KernelConvention c = {}) {
  cplx a = 1.0 - w * std::conj(eta);
  cplx k = 1.0 / (a * a);
  return c.normalized ? k / pi : k;
}

// the bracket difference factors as (w1-w2)(conj(e1)-conj(e2)) times a smooth term,
// so the diagonal needs no special branch
inline cplx g_kernel_preimages(cplx w1, cplx w2, cplx e1, cplx e2) {
  cplx b1 = std::conj(e1), b2 = std::conj(e2);
  cplx a11 = 1.0 - w1 * b1, a22 = 1.0 - w2 * b2;
  cplx a12 = 1.0 - w1 * b2, a21 = 1.0 - w2 * b1;
  cplx d = a11 * a12 * a21 * a22;
  return (a11 * a22 + a12 * a21) / (d * d) / (2.0 * pi * pi);
}

// literal quotient form, kept as an independent check of the factored one
inline cplx g_kernel_quotient(cplx w1, cplx w2, cplx e1, cplx e2) {
  auto k = [](cplx w, cplx e) {
    cplx a = 1.0 - w * std::conj(e);
    return 1.0 / (a * a);
  };
  cplx br = k(w1, e1) * k(w2, e2) - k(w1, e2) * k(w2, e1);
  return br / ((w1 - w2) * (std::conj(e1) - std::conj(e2))) / (2.0 * pi * pi);
}

inline cplx g_kernel(GPoint z, GPoint zeta) {
  auto [w1, w2] = phi_preimage(z);
  auto [e1, e2] = phi_preimage(zeta);
  return g_kernel_preimages(w1, w2, e1, e2);
}

inline cplx partial_kernel(int beta, cplx w, cplx eta) {
  cplx x = w * std::conj(eta);
  cplx a = 1.0 - x;
  cplx xb = ipow(x, beta);
  return ((beta + 1.0) * xb - double(beta) * xb * x) / (a * a);
}

inline cplx partial_kernel_series(int beta, cplx w, cplx eta) {
  cplx x = w * std::conj(eta);
  cplx a = 1.0 - x;
  cplx s = 0.0, xp = 1.0;
  for (int j = 0; j < beta; ++j, xp *= x) s += (j + 1.0) * xp;
  return 1.0 / (a * a) - s;
}

inline double factorial(int n) { return std::tgamma(n + 1.0); }

// d^beta/dw^beta of (1 - w conj(eta))^-2
inline cplx kernel_w_derivative(int beta, cplx w, cplx eta) {
  cplx b = std::conj(eta);
  return factorial(beta + 1) * ipow(b, beta) * ipow(1.0 - w * b, -(beta + 2));
}

// d^beta/dconj(eta)^beta of the same kernel
inline cplx kernel_etabar_derivative(int beta, cplx w, cplx eta) {
  return factorial(beta + 1) * ipow(w, beta) * ipow(1.0 - w * std::conj(eta), -(beta + 2));
}

// |K_beta| / |w^beta (1 - w conj(eta))^-2|, written without the division so w = 0 is fine
inline double kernel_bound_check(int beta, cplx w, cplx eta) {
  cplx x = w * std::conj(eta);
  return std::pow(std::abs(eta), beta) * std::abs((beta + 1.0) - double(beta) * x);
}

}  // namespace bergman
