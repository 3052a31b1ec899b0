#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include <fftw3.h>

#include "domain.hpp"
#include "kernels.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "symbolic.hpp"
#include "weights.hpp"

namespace bergman {

using symbolic::Exponent;

// floating-point copy of an exact polynomial, for fast evaluation
template <std::size_t N>
struct NumPoly {
  std::vector<std::pair<Exponent<N>, cplx>> terms;

  NumPoly() = default;
  explicit NumPoly(const symbolic::Polynomial<N>& p) {
    for (auto& [e, c] : p.terms()) terms.push_back({e, c.to_complex()});
  }

  cplx eval(const std::array<cplx, N>& x) const {
    cplx s = 0;
    for (auto& [e, c] : terms) {
      cplx m = c;
      for (std::size_t k = 0; k < N; ++k) m *= ipow(x[k], e[k]);
      s += m;
    }
    return s;
  }

  NumPoly derivative(const Exponent<N>& beta) const {
    NumPoly r;
    for (auto& [e, c] : terms) {
      cplx f = c;
      Exponent<N> g = e;
      bool zero = false;
      for (std::size_t k = 0; k < N && !zero; ++k) {
        if (beta[k] > e[k]) zero = true;
        for (int j = 0; j < beta[k]; ++j) f *= double(e[k] - j);
        g[k] -= beta[k];
      }
      if (!zero) r.terms.push_back({g, f});
    }
    return r;
  }
};

// test functions on G as polynomials in (z1, conj(z1), z2, conj(z2))
using ZPoly = NumPoly<4>;

inline cplx eval_z(const ZPoly& f, GPoint z) { return f.eval({z.z1, std::conj(z.z1), z.z2, std::conj(z.z2)}); }

// ---- angular transforms on a polar rule ----

class RingDft {
 public:
  RingDft(int n, double offset) : n_(n), off_(offset) {
    in_ = reinterpret_cast<cplx*>(fftw_malloc(sizeof(cplx) * n));
    out_ = reinterpret_cast<cplx*>(fftw_malloc(sizeof(cplx) * n));
    std::lock_guard<std::mutex> g(plan_mutex());
    auto* i = reinterpret_cast<fftw_complex*>(in_);
    auto* o = reinterpret_cast<fftw_complex*>(out_);
    fwd_ = fftw_plan_dft_1d(n, i, o, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_1d(n, i, o, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  RingDft(const RingDft&) = delete;
  RingDft& operator=(const RingDft&) = delete;
  ~RingDft() {
    {
      std::lock_guard<std::mutex> g(plan_mutex());
      fftw_destroy_plan(fwd_);
      fftw_destroy_plan(bwd_);
    }
    fftw_free(in_);
    fftw_free(out_);
  }

  // c[m - m_lo] = (1/n) sum_l v_l e^{-i m theta_l}, theta_l = 2 pi (l + offset) / n
  void forward(const cplx* v, int m_lo, int m_hi, cplx* c) {
    std::copy(v, v + n_, in_);
    fftw_execute(fwd_);
    for (int m = m_lo; m <= m_hi; ++m)
      c[m - m_lo] = out_[((m % n_) + n_) % n_] * std::polar(1.0 / n_, -2 * pi * m * off_ / n_);
  }
  // out_l = sum_m c[m - m_lo] e^{i m theta_l}
  void inverse(const std::vector<cplx>& c, int m_lo, cplx* out) {
    std::fill(in_, in_ + n_, cplx(0));
    for (std::size_t j = 0; j < c.size(); ++j) {
      int m = m_lo + int(j);
      in_[((m % n_) + n_) % n_] += c[j] * std::polar(1.0, 2 * pi * m * off_ / n_);
    }
    fftw_execute(bwd_);
    std::copy(out_, out_ + n_, out);
  }

 private:
  static std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
  }
  int n_;
  double off_;
  cplx *in_, *out_;
  fftw_plan fwd_, bwd_;
};

// Bergman projection (or its positive variant) of samples on a polar rule.
// Each ring is expanded in angular modes |m| < n/2 and the kernel is applied mode by mode.
class DiskProjection {
 public:
  DiskProjection(const GridFunction& f, bool positive) : q_(f.rule), pos_(positive) {
    if (!q_ || f.values.size() != q_->size()) throw std::invalid_argument("project_disk: grid function does not match rule");
    int n = q_->n_angular, nr = q_->n_radial;
    M_ = (n + 1) / 2;
    RingDft dft(n, q_->offset);
    if (!pos_) {
      a_.assign(M_, 0);
      std::vector<cplx> F(M_);
      for (int i = 0; i < nr; ++i) {
        dft.forward(&f.values[i * n], 0, M_ - 1, F.data());
        double ri = q_->radii[i], ui = q_->radial_weights[i], rp = 1;
        for (int m = 0; m < M_; ++m, rp *= ri) a_[m] += 2.0 * (m + 1) * ui * rp * F[m];
      }
    } else {
      G_.assign(nr, std::vector<cplx>(2 * M_ - 1));
      for (int i = 0; i < nr; ++i) dft.forward(&f.values[i * n], -(M_ - 1), M_ - 1, G_[i].data());
    }
  }

  bool positive() const { return pos_; }
  const std::vector<cplx>& coefficients() const { return a_; }

  cplx operator()(cplx w) const {
    if (!pos_) {
      cplx s = 0;
      for (int m = M_ - 1; m >= 0; --m) s = s * w + a_[m];
      return s;
    }
    cplx t = 0;
    for (int i = 0; i < q_->n_radial; ++i) {
      cplx z = q_->radii[i] * w, zb = std::conj(z);
      const auto& g = G_[i];
      cplx P = 0, Nn = 0;
      for (int m = M_ - 1; m >= 0; --m) P = P * z + g[m + M_ - 1];
      for (int m = M_ - 1; m >= 1; --m) Nn = (Nn + g[M_ - 1 - m]) * zb;
      t += q_->radial_weights[i] * 2.0 / (1 - std::norm(z)) * (P + Nn);
    }
    return t;
  }

  // values at the nodes of the rule the input was sampled on
  std::vector<cplx> on_rule() const {
    int n = q_->n_angular, nr = q_->n_radial;
    RingDft dft(n, q_->offset);
    std::vector<cplx> out(q_->size());
    for (int k = 0; k < nr; ++k) {
      double rk = q_->radii[k];
      std::vector<cplx> c;
      if (!pos_) {
        c.resize(M_);
        double rp = 1;
        for (int m = 0; m < M_; ++m, rp *= rk) c[m] = a_[m] * rp;
        dft.inverse(c, 0, &out[k * n]);
      } else {
        c.assign(2 * M_ - 1, 0);
        for (int i = 0; i < nr; ++i) {
          double ri = q_->radii[i], x = rk * ri;
          double f = q_->radial_weights[i] * 2.0 / (1 - x * x), xp = 1;
          const auto& g = G_[i];
          for (int m = 0; m < M_; ++m, xp *= x) {
            c[M_ - 1 + m] += f * xp * g[M_ - 1 + m];
            if (m) c[M_ - 1 - m] += f * xp * g[M_ - 1 - m];
          }
        }
        dft.inverse(c, -(M_ - 1), &out[k * n]);
      }
    }
    return out;
  }

 private:
  const QuadratureRule* q_;
  bool pos_;
  int M_ = 0;
  std::vector<cplx> a_;
  std::vector<std::vector<cplx>> G_;
};

inline DiskProjection project_disk(const GridFunction& f, bool positive = false) { return DiskProjection(f, positive); }

// ---- projection on G through the bidisk ----

struct SparsePoly2 {
  struct Term {
    int j, k;
    cplx c;
  };
  std::vector<Term> terms;
  int max_j = 0, max_k = 0;

  void add(int j, int k, cplx c) {
    terms.push_back({j, k, c});
    max_j = std::max(max_j, j);
    max_k = std::max(max_k, k);
  }

  // d^b1/dw1^b1 d^b2/dw2^b2 at (w1, w2)
  cplx eval(cplx w1, cplx w2, int b1 = 0, int b2 = 0) const {
    std::vector<cplx> p1(max_j + 1), p2(max_k + 1);
    p1[0] = p2[0] = 1;
    for (int j = 1; j <= max_j; ++j) p1[j] = p1[j - 1] * w1;
    for (int k = 1; k <= max_k; ++k) p2[k] = p2[k - 1] * w2;
    cplx s = 0;
    for (auto& t : terms) {
      if (t.j < b1 || t.k < b2) continue;
      double f = 1;
      for (int a = 0; a < b1; ++a) f *= t.j - a;
      for (int a = 0; a < b2; ++a) f *= t.k - a;
      s += f * t.c * p1[t.j - b1] * p2[t.k - b2];
    }
    return s;
  }
};

struct GProjectionOptions {
  int n_radial = 16, n_angular = 32;
  double drop = 1e-13;  // coefficients below drop * max(1, max |a|) are discarded
};

class GProjection {
 public:
  SparsePoly2 numerator, quotient;
  double division_remainder = 0;

  cplx at_preimage(cplx w1, cplx w2) const { return quotient.eval(w1, w2); }
  cplx operator()(GPoint z) const {
    auto [w1, w2] = phi_preimage(z);
    return at_preimage(w1, w2);
  }
  cplx derivative(int b1, int b2, cplx w1, cplx w2) const { return quotient.eval(w1, w2, b1, b2); }
};

// B_{DxD}(J * h o Phi) = J * (B_G h o Phi): project, antisymmetrise, divide by w1 - w2
inline GProjection project_G(const std::function<cplx(GPoint)>& h, const GProjectionOptions& o = {}) {
  auto q = build_polar_rule(o.n_radial, o.n_angular);
  int n = q.n_angular, nr = q.n_radial, M = (n + 1) / 2;
  RingDft dft(n, q.offset);
  // c_i(m) = 2 (m + 1) u_i r_i^m
  std::vector<std::vector<double>> cm(nr, std::vector<double>(M));
  for (int i = 0; i < nr; ++i) {
    double rp = 1;
    for (int m = 0; m < M; ++m, rp *= q.radii[i]) cm[i][m] = 2.0 * (m + 1) * q.radial_weights[i] * rp;
  }
  std::vector<cplx> a(M * M, 0);
  std::vector<cplx> row(n), T(std::size_t(n) * nr * M), col(n), F(M);
  for (int i1 = 0; i1 < nr; ++i1) {
    for (int l1 = 0; l1 < n; ++l1) {
      cplx e1 = q.nodes[i1 * n + l1];
      for (int i2 = 0; i2 < nr; ++i2) {
        for (int l2 = 0; l2 < n; ++l2) {
          cplx e2 = q.nodes[i2 * n + l2];
          row[l2] = (e1 - e2) * h(phi({e1, e2}));
        }
        dft.forward(row.data(), 0, M - 1, &T[(std::size_t(l1) * nr + i2) * M]);
      }
    }
    for (int i2 = 0; i2 < nr; ++i2)
      for (int m2 = 0; m2 < M; ++m2) {
        for (int l1 = 0; l1 < n; ++l1) col[l1] = T[(std::size_t(l1) * nr + i2) * M + m2];
        dft.forward(col.data(), 0, M - 1, F.data());
        for (int m1 = 0; m1 < M; ++m1) a[m1 * M + m2] += cm[i1][m1] * cm[i2][m2] * F[m1];
      }
  }
  double amax = 0;
  for (auto& v : a) amax = std::max(amax, std::abs(v));
  double cut = o.drop * std::max(1.0, amax);
  GProjection g;
  std::vector<cplx> A(M * M);
  for (int j = 0; j < M; ++j)
    for (int k = 0; k < M; ++k) {
      A[j * M + k] = 0.5 * (a[j * M + k] - a[k * M + j]);
      if (std::abs(a[j * M + k]) > cut) g.numerator.add(j, k, a[j * M + k]);
    }
  // synthetic division in w1: q_{j-1}[k] = A[j][k] + q_j[k-1]
  int K = 2 * M;
  std::vector<std::vector<cplx>> Q(M, std::vector<cplx>(K, 0));
  for (int j = M - 1; j >= 1; --j)
    for (int k = 0; k < K; ++k) {
      cplx v = k < M ? A[j * M + k] : cplx(0);
      if (j + 1 <= M - 1 && k >= 1) v += Q[j][k - 1];
      Q[j - 1][k] = v;
    }
  for (int k = 0; k < K; ++k) {
    cplx r = (k < M ? A[k] : cplx(0)) + (k >= 1 ? Q[0][k - 1] : cplx(0));
    g.division_remainder = std::max(g.division_remainder, std::abs(r));
  }
  for (int j = 0; j + 1 < M; ++j)
    for (int k = 0; k < K; ++k)
      if (std::abs(Q[j][k]) > cut) g.quotient.add(j, k, Q[j][k]);
  return g;
}

// ---- weighted norms ----

struct NormRule {
  std::vector<cplx> nodes;
  std::vector<double> weights;  // weight function folded in
  bool polar = false;           // nodes are exactly the polar rule's nodes
};

inline bool needs_singular_rule(const WeightSpec& sp) {
  if (sp.family != WeightFamily::pair_power) return false;
  return sp.s < 0 || sp.s != std::floor(sp.s) || int(sp.s) % 2 != 0;
}

inline NormRule make_norm_rule(const WeightSpec& spec, const QuadratureRule& q, const SingularOptions& so = {}) {
  if (!spec.on_disk()) throw std::invalid_argument("make_norm_rule: disk weight required");
  if (spec.p_dependent()) throw std::invalid_argument("make_norm_rule: resolve the p-dependent exponent first");
  NormRule nr;
  if (needs_singular_rule(spec)) {
    auto cr = build_centered_rule(unit_disk_region(), spec.w2, spec.s, so);
    nr.nodes = cr.nodes;
    nr.weights = cr.weights;
    return nr;
  }
  nr.polar = true;
  nr.nodes = q.nodes;
  for (std::size_t k = 0; k < q.size(); ++k) nr.weights.push_back(q.weights[k] * eval(q.nodes[k], spec));
  return nr;
}

inline double lp_norm(const NormRule& nr, const std::vector<cplx>& v, double p) {
  if (!(p >= 1)) throw std::invalid_argument("weighted_lp_norm: need p >= 1");
  double s = 0;
  for (std::size_t k = 0; k < v.size(); ++k) s += nr.weights[k] * std::pow(std::abs(v[k]), p);
  return std::pow(s, 1 / p);
}

template <class F>
double weighted_lp_norm(F&& f, double p, const WeightSpec& spec, const QuadratureRule& q, const SingularOptions& so = {}) {
  auto nr = make_norm_rule(spec, q, so);
  std::vector<cplx> v;
  v.reserve(nr.nodes.size());
  for (auto w : nr.nodes) v.push_back(f(w));
  return lp_norm(nr, v, p);
}

// ---- operator norm lower bounds on the disk ----

struct TestFunction {
  std::string id;
  std::function<cplx(cplx)> f;
};

struct OpNormEstimate {
  double value = 0;
  std::string argmax_id, family, weight;
  double p = 0;
  bool positive = false;
  std::size_t skipped = 0;
  std::vector<double> ratios;
};

inline std::vector<TestFunction> monomial_family(int kmax) {
  std::vector<TestFunction> fam;
  for (int k = 0; k <= kmax; ++k) fam.push_back({"mono" + std::to_string(k), [k](cplx e) { return ipow(e, k); }});
  return fam;
}

// normalised reproducing kernels, monomials, then seeded random polynomials in eta and conj(eta)
inline std::vector<TestFunction> test_family(std::uint64_t seed, int n_random = 20, bool enlarged = false) {
  std::vector<TestFunction> fam;
  std::vector<double> rings = {0.3, 0.6, 0.85};
  int nph = 8;
  auto add_kernel = [&](cplx a) {
    std::ostringstream id;
    id.precision(6);
    id << "kern(" << a.real() << "," << a.imag() << ")";
    fam.push_back({id.str(), [a](cplx e) {
                     cplx d = 1.0 - std::conj(a) * e;
                     return (1 - std::norm(a)) / (d * d);
                   }});
  };
  add_kernel(0.0);
  for (double r : rings)
    for (int j = 0; j < nph; ++j) add_kernel(std::polar(r, 2 * pi * j / nph));
  for (auto& m : monomial_family(6)) fam.push_back(m);
  McSampler rng(seed);
  for (int t = 0; t < n_random; ++t) {
    std::vector<std::pair<std::array<int, 2>, cplx>> cs;
    for (int a = 0; a <= 8; ++a)
      for (int b = 0; a + b <= 8; ++b) cs.push_back({{a, b}, cplx(2 * rng.uniform() - 1, 2 * rng.uniform() - 1)});
    fam.push_back({"rand" + std::to_string(t), [cs](cplx e) {
                     cplx s = 0, eb = std::conj(e);
                     for (auto& [ab, c] : cs) s += c * ipow(e, ab[0]) * ipow(eb, ab[1]);
                     return s;
                   }});
  }
  if (enlarged) {
    for (int j = 0; j < 16; ++j) add_kernel(std::polar(0.9, 2 * pi * (j + 0.5) / 16));
    for (int j = 0; j < 16; ++j) add_kernel(std::polar(0.45, 2 * pi * (j + 0.5) / 16));
  }
  return fam;
}

inline OpNormEstimate opnorm_lower_bound(bool positive, double p, const WeightSpec& spec,
                                         const std::vector<TestFunction>& family, const QuadratureRule& q,
                                         const SingularOptions& so = {}) {
  if (family.empty()) throw std::invalid_argument("opnorm_lower_bound: empty family");
  WeightSpec sp = spec.at_p(p);
  NormRule nr = make_norm_rule(sp, q, so);
  OpNormEstimate est;
  est.p = p;
  est.positive = positive;
  est.weight = sp.str();
  est.family = std::to_string(family.size()) + " functions";
  est.ratios = parallel_map(family.size(), [&](std::size_t t) {
    auto& f = family[t].f;
    GridFunction g = sample(q, [&](cplx e) { return positive ? cplx(std::abs(f(e))) : f(e); });
    DiskProjection P(g, positive);
    std::vector<cplx> in, out;
    if (nr.polar) {
      in = g.values;
      out = P.on_rule();
    } else {
      for (auto w : nr.nodes) {
        in.push_back(f(w));
        out.push_back(P(w));
      }
    }
    double d = lp_norm(nr, in, p);
    return d > 0 ? lp_norm(nr, out, p) / d : -1.0;
  });
  bool any = false;
  for (std::size_t t = 0; t < family.size(); ++t) {
    if (est.ratios[t] < 0) {
      ++est.skipped;
      continue;
    }
    if (!any || est.ratios[t] > est.value) {
      est.value = est.ratios[t];
      est.argmax_id = family[t].id;
      any = true;
    }
  }
  return est;
}

// ---- Sobolev norms on G through the covering ----

// derivative D^alpha f at z = Phi(w); alpha indexes (z1, conj z1, z2, conj z2)
using DerivativeFn = std::function<cplx(GPoint z, BidiskPoint w, const Exponent<4>& alpha)>;

inline std::vector<Exponent<4>> multi_indices(int k) {
  std::vector<Exponent<4>> out;
  for (int a = 0; a <= k; ++a)
    for (int b = 0; a + b <= k; ++b)
      for (int c = 0; a + b + c <= k; ++c)
        for (int d = 0; a + b + c + d <= k; ++d) out.push_back({a, b, c, d});
  return out;
}

// (sum_{|alpha| <= k} int_G |D^alpha f|^p |z1^2 - 4 z2|^l dv)^(1/p), pulled back with |J|^2 / 2
inline double weighted_sobolev_norm(const DerivativeFn& d, int k, double p, double l, const QuadratureRule& qa,
                                    const QuadratureRule& qb) {
  if (!d) throw std::invalid_argument("weighted_sobolev_norm: missing derivative callbacks");
  auto alphas = multi_indices(k);
  auto rows = parallel_map(qa.size(), [&](std::size_t i) {
    double s = 0;
    for (std::size_t j = 0; j < qb.size(); ++j) {
      BidiskPoint w{qa.nodes[i], qb.nodes[j]};
      GPoint z = phi(w);
      double jac = std::norm(jacobian(w));
      double wt = qb.weights[j] * std::pow(jac, l + 1) * 0.5;
      double t = 0;
      for (auto& a : alphas) t += std::pow(std::abs(d(z, w, a)), p);
      s += wt * t;
    }
    return qa.weights[i] * s;
  });
  double s = 0;
  for (double r : rows) s += r;
  return std::pow(s, 1 / p);
}

inline DerivativeFn zpoly_derivatives(const ZPoly& f, int k) {
  std::map<Exponent<4>, ZPoly> ds;
  for (auto& a : multi_indices(k)) ds[a] = f.derivative(a);
  return [ds](GPoint z, BidiskPoint, const Exponent<4>& a) { return eval_z(ds.at(a), z); };
}

// derivatives of a G-projection: holomorphic, so only pure z-derivatives survive,
// obtained from d/dw through the dz expansion
inline DerivativeFn projection_derivatives(const GProjection& g, int k) {
  struct Num {
    int m;
    std::vector<std::pair<Exponent<2>, NumPoly<2>>> terms;
  };
  std::map<Exponent<2>, Num> ex;
  for (int a1 = 0; a1 <= k; ++a1)
    for (int a2 = 0; a1 + a2 <= k; ++a2) {
      if (a1 + a2 == 0) continue;
      auto e = symbolic::dz_expansion({a1, a2});
      Num n{e.m, {}};
      for (auto& [b, P] : e.terms) n.terms.push_back({b, NumPoly<2>(P)});
      ex[{a1, a2}] = n;
    }
  return [ex, &g](GPoint, BidiskPoint w, const Exponent<4>& a) -> cplx {
    if (a[1] || a[3]) return 0.0;
    if (a[0] + a[2] == 0) return g.at_preimage(w.w1, w.w2);
    const Num& n = ex.at({a[0], a[2]});
    cplx s = 0;
    for (auto& [b, P] : n.terms) s += P.eval({w.w1, w.w2}) * g.derivative(b[0], b[1], w.w1, w.w2);
    return s / ipow(w.w1 - w.w2, n.m);
  };
}

// ---- direct G-side projection by Monte Carlo over the covering ----

struct ComplexMc {
  cplx estimate;
  double se_re = 0, se_im = 0;
  double se() const { return std::hypot(se_re, se_im); }
};

inline std::vector<BidiskPoint> sample_bidisk(std::size_t n, std::uint64_t seed) {
  McSampler rng(seed);
  std::vector<BidiskPoint> pts(n);
  for (auto& b : pts) {
    b.w1 = rng.disk_point();
    b.w2 = rng.disk_point();
  }
  return pts;
}

// int_{DxD} g_kernel(z, Phi(eta)) h(Phi(eta)) |eta1 - eta2|^2 dv(eta); the kernel's
// 1/(2 pi^2) is the covering-measure constant, so no factor 1/2 appears here
inline ComplexMc mc_g_projection(const std::vector<BidiskPoint>& pts, const std::function<cplx(GPoint)>& h, GPoint z) {
  auto [w1, w2] = phi_preimage(z);
  Welford re, im;
  for (auto& b : pts) {
    cplx v = g_kernel_preimages(w1, w2, b.w1, b.w2) * h(phi(b)) * std::norm(jacobian(b));
    re.add(v.real());
    im.add(v.imag());
  }
  double vol = pi * pi, n = double(pts.size());
  return {vol * cplx(re.mean, im.mean), vol * std::sqrt(re.var() / n), vol * std::sqrt(im.var() / n)};
}

}  // namespace bergman
