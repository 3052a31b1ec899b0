#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace bergman {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

struct SingularLocusError : std::domain_error {
  using std::domain_error::domain_error;
};

inline cplx ipow(cplx x, int n) {
  if (n < 0) return 1.0 / ipow(x, -n);
  cplx r = 1.0;
  for (; n; n >>= 1, x *= x)
    if (n & 1) r *= x;
  return r;
}

struct BidiskPoint {
  cplx w1, w2;
};

struct GPoint {
  cplx z1, z2;
};

struct TentSpec {
  cplx z;
  double radius() const { return 1.0 - std::abs(z); }
  bool whole() const { return z == cplx(0.0); }
  cplx apex() const { return whole() ? cplx(1.0) : z / std::abs(z); }
};

inline bool in_disk(cplx w) { return std::norm(w) < 1.0; }

inline GPoint phi(BidiskPoint p) { return {p.w1 + p.w2, p.w1 * p.w2}; }

// roots of t^2 - z1 t + z2; the larger root is formed without cancellation
inline std::pair<cplx, cplx> phi_preimage(cplx z1, cplx z2) {
  cplx d = std::sqrt(z1 * z1 - 4.0 * z2);
  cplx a = z1 + d, b = z1 - d;
  cplx big = std::norm(a) >= std::norm(b) ? a : b;
  if (big == cplx(0.0)) return {0.0, 0.0};
  cplx t1 = 0.5 * big;
  return {t1, z2 / t1};
}

inline std::pair<cplx, cplx> phi_preimage(GPoint z) { return phi_preimage(z.z1, z.z2); }

inline bool in_G(cplx z1, cplx z2) {
  auto [t1, t2] = phi_preimage(z1, z2);
  return std::abs(t1) < 1.0 && std::abs(t2) < 1.0;
}

inline bool in_G(GPoint z) { return in_G(z.z1, z.z2); }

inline cplx jacobian(BidiskPoint p) { return p.w1 - p.w2; }

inline double delta_weight(GPoint z) {
  double a = std::abs(z.z1 * z.z1 - 4.0 * z.z2);
  if (a == 0.0) throw SingularLocusError("delta_weight: point on the singular locus z1^2 = 4 z2");
  return -std::log(a);
}

inline bool tent_contains(const TentSpec& t, cplx w) {
  if (t.whole()) return true;
  return std::abs(1.0 - std::conj(w) * t.apex()) < t.radius();
}

// area of the unit disk intersected with a disk of radius R centred on the unit circle
inline double lens_area(double R) {
  return 2.0 * std::asin(0.5 * R) + R * R * std::acos(0.5 * R) - 0.5 * R * std::sqrt(4.0 - R * R);
}

inline double tent_area(const TentSpec& t) { return t.whole() ? pi : lens_area(t.radius()); }

}  // namespace bergman
