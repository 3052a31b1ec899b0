#pragma once

#include <array>
#include <complex>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace bergman::symbolic {

using boost::multiprecision::cpp_rational;

struct GaussRational {
  cpp_rational re, im;

  GaussRational() = default;
  GaussRational(long long r) : re(r) {}
  GaussRational(cpp_rational r, cpp_rational i = 0) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return re == 0 && im == 0; }
  GaussRational conj() const { return {re, -im}; }
  std::complex<double> to_complex() const { return {static_cast<double>(re), static_cast<double>(im)}; }

  friend GaussRational operator+(const GaussRational& a, const GaussRational& b) { return {a.re + b.re, a.im + b.im}; }
  friend GaussRational operator-(const GaussRational& a, const GaussRational& b) { return {a.re - b.re, a.im - b.im}; }
  friend GaussRational operator-(const GaussRational& a) { return {-a.re, -a.im}; }
  friend GaussRational operator*(const GaussRational& a, const GaussRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  GaussRational& operator+=(const GaussRational& b) { return *this = *this + b; }
  friend bool operator==(const GaussRational& a, const GaussRational& b) { return a.re == b.re && a.im == b.im; }

  std::string str() const {
    std::ostringstream o;
    if (im == 0) o << re;
    else if (re == 0) o << im << "i";
    else o << "(" << re << (im > 0 ? "+" : "") << im << "i)";
    return o.str();
  }
};

template <std::size_t N>
using Exponent = std::array<int, N>;

// sparse polynomial with exact coefficients; no zero coefficient is ever stored
template <std::size_t N>
class Polynomial {
 public:
  using Map = std::map<Exponent<N>, GaussRational>;

  Polynomial() = default;
  Polynomial(GaussRational c) { add_term({}, c); }

  static Polynomial variable(std::size_t i) {
    Exponent<N> e{};
    e[i] = 1;
    Polynomial p;
    p.add_term(e, 1);
    return p;
  }
  static Polynomial monomial(const Exponent<N>& e, GaussRational c = 1) {
    Polynomial p;
    p.add_term(e, c);
    return p;
  }

  const Map& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }

  void add_term(const Exponent<N>& e, const GaussRational& c) {
    if (c.is_zero()) return;
    auto it = t_.find(e);
    if (it == t_.end()) {
      t_.emplace(e, c);
      return;
    }
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
  }

  GaussRational coefficient(const Exponent<N>& e) const {
    auto it = t_.find(e);
    return it == t_.end() ? GaussRational{} : it->second;
  }

  int degree() const {
    int d = -1;
    for (auto& [e, c] : t_) {
      int s = 0;
      for (int x : e) s += x;
      d = std::max(d, s);
    }
    return d;
  }

  int degree_in(std::size_t i) const {
    int d = -1;
    for (auto& [e, c] : t_) d = std::max(d, e[i]);
    return d;
  }

  Polynomial derivative(std::size_t i) const {
    Polynomial r;
    for (auto& [e, c] : t_) {
      if (e[i] == 0) continue;
      Exponent<N> f = e;
      --f[i];
      r.add_term(f, c * GaussRational(e[i]));
    }
    return r;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) {
    for (auto& [e, c] : b.t_) a.add_term(e, c);
    return a;
  }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) {
    for (auto& [e, c] : b.t_) a.add_term(e, -c);
    return a;
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    for (auto& [ea, ca] : a.t_)
      for (auto& [eb, cb] : b.t_) {
        Exponent<N> e;
        for (std::size_t k = 0; k < N; ++k) e[k] = ea[k] + eb[k];
        r.add_term(e, ca * cb);
      }
    return r;
  }
  Polynomial& operator+=(const Polynomial& b) { return *this = *this + b; }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.t_ == b.t_; }

  Polynomial pow(int n) const {
    Polynomial r(1), b = *this;
    for (; n; n >>= 1, b = b * b)
      if (n & 1) r = r * b;
    return r;
  }

  std::complex<double> eval(const std::array<std::complex<double>, N>& x) const {
    std::complex<double> s = 0;
    for (auto& [e, c] : t_) {
      std::complex<double> m = c.to_complex();
      for (std::size_t k = 0; k < N; ++k)
        for (int j = 0; j < e[k]; ++j) m *= x[k];
      s += m;
    }
    return s;
  }

  // exact quotient by (x_i - x_j); returns false if not divisible
  bool divide_by_difference(std::size_t i, std::size_t j, Polynomial& q) const {
    Polynomial p = *this;
    q = Polynomial();
    for (;;) {
      const Exponent<N>* top = nullptr;
      for (auto& [e, c] : p.t_)
        if (e[i] > 0 && (!top || e[i] > (*top)[i])) top = &e;
      if (!top) break;
      Exponent<N> e = *top;
      GaussRational c = p.t_.at(e);
      Exponent<N> f = e;
      --f[i];
      q.add_term(f, c);
      p.add_term(e, -c);
      Exponent<N> g = f;
      ++g[j];
      p.add_term(g, c);
    }
    return p.is_zero();
  }

  std::string str(const std::array<const char*, N>& names) const {
    if (t_.empty()) return "0";
    std::ostringstream o;
    bool first = true;
    for (auto& [e, c] : t_) {
      if (!first) o << " + ";
      first = false;
      o << c.str();
      for (std::size_t k = 0; k < N; ++k)
        if (e[k]) o << "*" << names[k] << (e[k] > 1 ? "^" + std::to_string(e[k]) : "");
    }
    return o.str();
  }

 private:
  Map t_;
};

using BivarPoly = Polynomial<2>;  // w1, w2  (or z1, z2)
using MixedPoly = Polynomial<4>;  // w1, conj(w1), w2, conj(w2)  (or the z analogues)
using EtaPoly = Polynomial<3>;    // eta, conj(eta), w

inline const std::array<const char*, 2> w_names{"w1", "w2"};
inline const std::array<const char*, 4> mixed_names{"w1", "cw1", "w2", "cw2"};
inline const std::array<const char*, 3> eta_names{"eta", "ceta", "w"};

// numerator over (w1 - w2)^m
struct RationalFunction {
  BivarPoly num;
  int m = 0;

  RationalFunction normalized() const {
    RationalFunction r = *this;
    BivarPoly q;
    while (r.m > 0 && !r.num.is_zero() && r.num.divide_by_difference(0, 1, q)) {
      r.num = q;
      --r.m;
    }
    if (r.num.is_zero()) r.m = 0;
    return r;
  }
};

inline BivarPoly diff_w() { return BivarPoly::variable(0) - BivarPoly::variable(1); }

inline bool operator==(const RationalFunction& a, const RationalFunction& b) {
  BivarPoly u = diff_w();
  return a.num * u.pow(b.m) == b.num * u.pow(a.m);
}

struct DiffOpExpansion {
  int order = 0;
  int m = 0;  // denominator power of (w1 - w2)
  std::map<Exponent<2>, BivarPoly> terms;  // beta -> P_beta
};

// applying u^-1 (A d1 + B d2) to u^-m P d^beta, u = w1 - w2, gives u^-(m+2) times
//   m (B - A) P d^beta + u (A d1 P + B d2 P) d^beta + u A P d^(beta+e1) + u B P d^(beta+e2)
inline DiffOpExpansion dz_expansion(const Exponent<2>& alpha) {
  int n = alpha[0] + alpha[1];
  if (n < 1) throw std::invalid_argument("dz_expansion: |alpha| must be >= 1");
  BivarPoly w1 = BivarPoly::variable(0), w2 = BivarPoly::variable(1), u = diff_w();
  auto coeffs = [&](int which) -> std::pair<BivarPoly, BivarPoly> {
    if (which == 0) return {w1, BivarPoly(-1) * w2};
    return {BivarPoly(-1), BivarPoly(1)};
  };
  std::vector<int> ops;
  for (int k = 0; k < alpha[0]; ++k) ops.push_back(0);
  for (int k = 0; k < alpha[1]; ++k) ops.push_back(1);
  DiffOpExpansion e;
  e.order = n;
  auto [A0, B0] = coeffs(ops[0]);
  e.m = 1;
  e.terms[{1, 0}] = A0;
  e.terms[{0, 1}] = B0;
  for (std::size_t k = 1; k < ops.size(); ++k) {
    auto [A, B] = coeffs(ops[k]);
    std::map<Exponent<2>, BivarPoly> nt;
    BivarPoly mBA = BivarPoly(GaussRational(e.m)) * (B - A);
    for (auto& [beta, P] : e.terms) {
      nt[beta] += mBA * P + u * (A * P.derivative(0) + B * P.derivative(1));
      nt[{beta[0] + 1, beta[1]}] += u * A * P;
      nt[{beta[0], beta[1] + 1}] += u * B * P;
    }
    e.terms.clear();
    for (auto& [beta, P] : nt)
      if (!P.is_zero()) e.terms[beta] = P;
    e.m += 2;
  }
  if (e.m != 2 * n - 1) throw std::logic_error("dz_expansion: denominator power mismatch");
  for (auto& [beta, P] : e.terms)
    if (P.degree() > 2 * n - 1) throw std::logic_error("dz_expansion: degree bound violated");
  return e;
}

// f(z1, z2) -> f(w1 + w2, w1 w2)
inline BivarPoly pullback(const BivarPoly& f) {
  BivarPoly s = BivarPoly::variable(0) + BivarPoly::variable(1);
  BivarPoly p = BivarPoly::variable(0) * BivarPoly::variable(1);
  BivarPoly r;
  for (auto& [e, c] : f.terms()) r += BivarPoly(c) * s.pow(e[0]) * p.pow(e[1]);
  return r;
}

inline MixedPoly pullback(const MixedPoly& f) {
  using V = MixedPoly;
  V s = V::variable(0) + V::variable(2), cs = V::variable(1) + V::variable(3);
  V p = V::variable(0) * V::variable(2), cp = V::variable(1) * V::variable(3);
  V r;
  for (auto& [e, c] : f.terms()) r += V(c) * s.pow(e[0]) * cs.pow(e[1]) * p.pow(e[2]) * cp.pow(e[3]);
  return r;
}

template <std::size_t N>
Polynomial<N> derivative(const Polynomial<N>& f, const Exponent<N>& beta) {
  Polynomial<N> r = f;
  for (std::size_t i = 0; i < N; ++i)
    for (int k = 0; k < beta[i]; ++k) r = r.derivative(i);
  return r;
}

inline RationalFunction apply_expansion(const DiffOpExpansion& e, const BivarPoly& f) {
  BivarPoly g = pullback(f), num;
  for (auto& [beta, P] : e.terms) num += P * derivative(g, beta);
  return RationalFunction{num, e.m}.normalized();
}

inline RationalFunction dz_direct(const Exponent<2>& alpha, const BivarPoly& f) {
  return RationalFunction{pullback(derivative(f, alpha)), 0};
}

// D^beta in (w1, cw1, w2, cw2) as sum over alpha in (z1, cz1, z2, cz2) of P_alpha D^alpha
struct MixedExpansion {
  std::map<Exponent<4>, MixedPoly> terms;
};

inline MixedExpansion dwbar_expansion(const Exponent<4>& beta) {
  // d/dw1 = Dz1 + w2 Dz2, d/dcw1 = Dcz1 + cw2 Dcz2, d/dw2 = Dz1 + w1 Dz2, d/dcw2 = Dcz1 + cw1 Dcz2
  static const int first[4] = {0, 1, 0, 1}, second[4] = {2, 3, 2, 3}, coef_var[4] = {2, 3, 0, 1};
  MixedExpansion e;
  e.terms[{0, 0, 0, 0}] = MixedPoly(1);
  int total = 0;
  for (int v = 0; v < 4; ++v)
    for (int k = 0; k < beta[v]; ++k, ++total) {
      std::map<Exponent<4>, MixedPoly> nt;
      MixedPoly cv = MixedPoly::variable(coef_var[v]);
      for (auto& [a, P] : e.terms) {
        nt[a] += P.derivative(v);
        Exponent<4> a1 = a, a2 = a;
        ++a1[first[v]];
        ++a2[second[v]];
        nt[a1] += P;
        nt[a2] += cv * P;
      }
      e.terms.clear();
      for (auto& [a, P] : nt)
        if (!P.is_zero()) e.terms[a] = P;
    }
  for (auto& [a, P] : e.terms)
    if (P.degree() > total) throw std::logic_error("dwbar_expansion: degree bound violated");
  return e;
}

// sum_alpha P_alpha (D^alpha f) o Phi for f a polynomial in (z1, cz1, z2, cz2)
inline MixedPoly apply_dwbar(const MixedExpansion& e, const MixedPoly& f) {
  MixedPoly r;
  for (auto& [a, P] : e.terms) r += P * pullback(derivative(f, a));
  return r;
}

// dz_expansion pieces composed with the holomorphic part of a dwbar expansion,
// applied to an arbitrary polynomial q(w1, w2)
inline RationalFunction compose_first_order(const MixedExpansion& e, const BivarPoly& q) {
  BivarPoly u = diff_w(), num;
  int m = 1;
  for (auto& [a, P] : e.terms) {
    if (a[1] || a[3] || a[0] + a[2] != 1) throw std::invalid_argument("compose_first_order: first-order holomorphic only");
    BivarPoly Ph;
    for (auto& [ex, c] : P.terms()) {
      if (ex[1] || ex[3]) throw std::invalid_argument("compose_first_order: antiholomorphic coefficient");
      Ph.add_term({ex[0], ex[2]}, c);
    }
    auto d = dz_expansion({a[0], a[2]});
    for (auto& [beta, Q] : d.terms) num += Ph * Q * derivative(q, beta);
  }
  return RationalFunction{num, m}.normalized();
}

// T = w d/deta - conj(eta) d/dconj(eta) on polynomials in (eta, conj(eta), w)
inline EtaPoly tangential_apply(EtaPoly g, int power) {
  EtaPoly w = EtaPoly::variable(2), b = EtaPoly::variable(1);
  for (int k = 0; k < power; ++k) g = w * g.derivative(0) - b * g.derivative(1);
  return g;
}

// T^2 expanded by hand: w^2 d^2 - 2 w cb d cd + cb^2 cd^2 + cb cd
inline EtaPoly tangential_square_direct(const EtaPoly& g) {
  EtaPoly w = EtaPoly::variable(2), b = EtaPoly::variable(1);
  return w * w * derivative(g, {2, 0, 0}) - EtaPoly(2) * w * b * derivative(g, {1, 1, 0}) +
         b * b * derivative(g, {0, 2, 0}) + b * g.derivative(1);
}

inline EtaPoly conj_eta_power(int m) { return EtaPoly::monomial({0, m, 0}); }

struct TangentialRow {
  int m, beta;
  GaussRational lhs, rhs;
  bool equal;
};

// on conj(eta)^m: conj(eta)^beta dbar^beta gives the falling factorial, T^beta gives (-m)^beta
inline std::vector<TangentialRow> tangential_report(int m_max, int beta_max) {
  if (m_max < 0 || beta_max < 1) throw std::invalid_argument("tangential_report: bad bounds");
  std::vector<TangentialRow> rows;
  for (int m = 0; m <= m_max; ++m)
    for (int beta = 1; beta <= beta_max; ++beta) {
      EtaPoly f = conj_eta_power(m);
      EtaPoly l = conj_eta_power(beta) * derivative(f, {0, beta, 0});
      EtaPoly r = tangential_apply(f, beta);
      GaussRational lc = l.coefficient({0, m, 0}), rc = r.coefficient({0, m, 0});
      rows.push_back({m, beta, lc, rc, l == r});
    }
  return rows;
}

// signed Stirling numbers of the first kind
inline std::vector<std::vector<long long>> stirling_first(int n) {
  std::vector<std::vector<long long>> s(n + 1, std::vector<long long>(n + 1, 0));
  s[0][0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int k = 1; k <= i; ++k) s[i][k] = s[i - 1][k - 1] - (i - 1) * s[i - 1][k];
  return s;
}

// conj(eta)^beta dbar^beta = sum_k s(beta, k) S^k with S = conj(eta) dbar, checked on conj(eta)^m
inline bool stirling_identity_check(int beta_max, int m_max) {
  if (beta_max < 1 || m_max < 0) throw std::invalid_argument("stirling_identity_check: bad bounds");
  auto s = stirling_first(beta_max);
  EtaPoly b = EtaPoly::variable(1);
  auto S = [&](const EtaPoly& g) { return b * g.derivative(1); };
  for (int beta = 1; beta <= beta_max; ++beta)
    for (int m = 0; m <= m_max; ++m) {
      EtaPoly f = conj_eta_power(m);
      EtaPoly lhs = conj_eta_power(beta) * derivative(f, {0, beta, 0});
      EtaPoly rhs, Sk = f;
      for (int k = 1; k <= beta; ++k) {
        Sk = S(Sk);
        rhs += EtaPoly(GaussRational(s[beta][k])) * Sk;
      }
      if (!(lhs == rhs)) return false;
    }
  return true;
}

}  // namespace bergman::symbolic
