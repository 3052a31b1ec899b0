#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "domain.hpp"

namespace bergman {

struct InvalidRuleError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NonIntegrableError : std::domain_error {
  using std::domain_error::domain_error;
};

inline constexpr double inf = std::numeric_limits<double>::infinity();

struct GaussLegendre {
  std::vector<double> x, w;
};

// nodes and weights on [-1, 1]
inline GaussLegendre gauss_legendre(int n) {
  GaussLegendre g;
  g.x.resize(n);
  g.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5)), dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = 0;
      for (int k = 1; k <= n; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1);
      double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double p0 = 1, p1 = 0;
    for (int k = 1; k <= n; ++k) {
      double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p2) / k;
    }
    dp = n * (z * p0 - p1) / (z * z - 1);
    g.x[i] = -z;
    g.x[n - 1 - i] = z;
    g.w[i] = g.w[n - 1 - i] = 2 / ((1 - z * z) * dp * dp);
  }
  return g;
}

struct QuadratureRule {
  std::vector<cplx> nodes;
  std::vector<double> weights;
  int n_radial = 0, n_angular = 0;
  std::string scheme;
  // polar structure: node (i, l) sits at index i * n_angular + l
  std::vector<double> radii, radial_weights;  // radial weights carry the factor r
  double offset = 0;                           // angular shift in units of 2 pi / n_angular

  std::size_t size() const { return nodes.size(); }
  double theta(int l) const { return 2 * pi * (l + offset) / n_angular; }
  std::string sizes() const { return std::to_string(n_radial) + "x" + std::to_string(n_angular); }
};

inline QuadratureRule build_polar_rule(int n_r, int n_theta, double offset = 0.0) {
  if (n_r < 2 || n_theta < 4)
    throw InvalidRuleError("invalid rule: need n_r >= 2 and n_theta >= 4, got " + std::to_string(n_r) + "x" +
                           std::to_string(n_theta));
  QuadratureRule q;
  q.n_radial = n_r;
  q.n_angular = n_theta;
  q.offset = offset;
  q.scheme = "gauss-legendre-r/uniform-theta";
  auto g = gauss_legendre(n_r);
  for (int i = 0; i < n_r; ++i) {
    double r = 0.5 * (g.x[i] + 1);
    q.radii.push_back(r);
    q.radial_weights.push_back(0.5 * g.w[i] * r);
  }
  double wt = 2 * pi / n_theta;
  for (int i = 0; i < n_r; ++i)
    for (int l = 0; l < n_theta; ++l) {
      q.nodes.push_back(std::polar(q.radii[i], q.theta(l)));
      q.weights.push_back(q.radial_weights[i] * wt);
    }
  return q;
}

// parses "NRxNT"
inline QuadratureRule build_polar_rule(const std::string& spec) {
  auto x = spec.find('x');
  if (x == std::string::npos) throw InvalidRuleError("invalid rule: expected NRxNT, got '" + spec + "'");
  int a, b;
  try {
    a = std::stoi(spec.substr(0, x));
    b = std::stoi(spec.substr(x + 1));
  } catch (...) {
    throw InvalidRuleError("invalid rule: expected NRxNT, got '" + spec + "'");
  }
  return build_polar_rule(a, b);
}

struct GridFunction {
  const QuadratureRule* rule = nullptr;
  std::vector<cplx> values;
};

template <class F>
GridFunction sample(const QuadratureRule& q, F&& f) {
  GridFunction g{&q, {}};
  g.values.reserve(q.size());
  for (auto w : q.nodes) g.values.push_back(f(w));
  return g;
}

inline cplx integrate(const QuadratureRule& q, const GridFunction& f) {
  if (f.values.size() != q.size()) throw std::invalid_argument("integrate: grid function size mismatch");
  cplx s = 0;
  for (std::size_t k = 0; k < q.size(); ++k) s += q.weights[k] * f.values[k];
  return s;
}

template <class F>
  requires std::invocable<F, cplx>
cplx integrate(const QuadratureRule& q, F&& f) {
  cplx s = 0;
  for (std::size_t k = 0; k < q.size(); ++k) s += q.weights[k] * cplx(f(q.nodes[k]));
  return s;
}

template <class F>
cplx integrate_product(const QuadratureRule& a, const QuadratureRule& b, F&& f) {
  cplx s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cplx t = 0;
    for (std::size_t j = 0; j < b.size(); ++j) t += b.weights[j] * cplx(f(a.nodes[i], b.nodes[j]));
    s += a.weights[i] * t;
  }
  return s;
}

// ---- rays from a centre through an intersection of disks ----

struct Disk {
  cplx c;
  double r;
};

using Region = std::vector<Disk>;

inline Region unit_disk_region() { return {{0.0, 1.0}}; }

inline Region tent_region(const TentSpec& t) {
  if (t.whole()) return unit_disk_region();
  return {{0.0, 1.0}, {t.apex(), t.radius()}};
}

struct RaySpan {
  double lo = 0, hi = 0;
  bool empty() const { return !(hi > lo); }
};

inline RaySpan ray_span(const Region& reg, cplx x, double phi) {
  cplx e = std::polar(1.0, phi);
  RaySpan s{0, inf};
  for (auto& d : reg) {
    cplx v = x - d.c;
    double b = std::real(v * std::conj(e));
    double c0 = std::norm(v) - d.r * d.r;
    double disc = b * b - c0;
    if (disc <= 0) return {0, 0};
    double sq = std::sqrt(disc), r1, r2;
    if (b > 0) {
      r1 = -(b + sq);
      r2 = c0 / r1;
    } else {
      r2 = sq - b;
      r1 = r2 > 0 ? c0 / r2 : 0;
    }
    if (r2 <= 0) return {0, 0};
    s.lo = std::max(s.lo, std::max(r1, 0.0));
    s.hi = std::min(s.hi, r2);
  }
  if (s.empty()) return {0, 0};
  return s;
}

// true when x lies in the closure of the region
inline bool region_closure_contains(const Region& reg, cplx x) {
  for (auto& d : reg)
    if (std::abs(x - d.c) > d.r) return false;
  return true;
}

// angles (relative to x) where the ray span is not smooth: tangencies and corners
inline std::vector<double> angular_breaks(const Region& reg, cplx x) {
  std::vector<double> br;
  for (auto& d : reg) {
    double L = std::abs(d.c - x);
    if (L > d.r) {
      double a = std::arg(d.c - x), h = std::asin(d.r / L);
      br.push_back(a - h);
      br.push_back(a + h);
    }
  }
  for (std::size_t i = 0; i < reg.size(); ++i)
    for (std::size_t j = i + 1; j < reg.size(); ++j) {
      cplx c1 = reg[i].c, c2 = reg[j].c;
      double r1 = reg[i].r, r2 = reg[j].r, L = std::abs(c2 - c1);
      if (L == 0 || L >= r1 + r2 || L <= std::abs(r1 - r2)) continue;
      double a = (r1 * r1 - r2 * r2 + L * L) / (2 * L), h = std::sqrt(std::max(0.0, r1 * r1 - a * a));
      cplx u = (c2 - c1) / L, m = c1 + a * u;
      for (double sg : {-1.0, 1.0}) {
        cplx p = m + sg * h * cplx(0, 1) * u;
        if (std::abs(p - x) > 1e-300) br.push_back(std::arg(p - x));
      }
    }
  for (auto& b : br) b = std::remainder(b, 2 * pi);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end(), [](double a, double b) { return b - a < 1e-15; }), br.end());
  if (br.empty()) br.push_back(-pi);
  return br;
}

struct AngleNode {
  double phi, w;
};

struct AngularOptions {
  int n_gl = 10;
  double rtol = 1e-11;
  int max_depth = 40;
  double panel_width = pi / 4;  // initial panel width before refinement
};

// Adaptive Gauss-Legendre over the breakpoint intervals, each intervals mapped by
// phi = A + (B - A)(1 - cos(pi u))/2 so square-root edges become smooth.
// g returns K non-negative-scale components; all components refine together.
template <std::size_t K, class G>
std::vector<AngleNode> angular_nodes(G&& g, const std::vector<double>& breaks, const AngularOptions& o = {}) {
  using V = std::array<double, K>;
  auto gl = gauss_legendre(o.n_gl);
  struct Leaf {
    double A, B, u0, u1;
    int depth;
  };
  std::vector<double> b = breaks;
  b.push_back(breaks.front() + 2 * pi);
  auto panel = [&](const Leaf& f, std::vector<AngleNode>* out) {
    V s{};
    double hu = 0.5 * (f.u1 - f.u0), mu = 0.5 * (f.u1 + f.u0);
    for (int j = 0; j < o.n_gl; ++j) {
      double u = mu + hu * gl.x[j];
      double ph = f.A + (f.B - f.A) * 0.5 * (1 - std::cos(pi * u));
      double w = gl.w[j] * hu * (f.B - f.A) * 0.5 * pi * std::sin(pi * u);
      V v = g(ph);
      for (std::size_t k = 0; k < K; ++k) s[k] += w * v[k];
      if (out) out->push_back({ph, w});
    }
    return s;
  };
  std::vector<Leaf> todo;
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    double A = b[i], B = b[i + 1];
    if (B - A <= 0) continue;
    int np = std::max(1, int(std::ceil((B - A) / o.panel_width)));
    for (int p = 0; p < np; ++p) todo.push_back({A, B, double(p) / np, double(p + 1) / np, 0});
  }
  V scale{};
  std::vector<V> est;
  for (auto& f : todo) {
    est.push_back(panel(f, nullptr));
    for (std::size_t k = 0; k < K; ++k) scale[k] += std::abs(est.back()[k]);
  }
  double smax = *std::max_element(scale.begin(), scale.end());
  for (auto& s : scale) s = std::max({s, 1e-12 * smax, 1e-300});
  std::vector<AngleNode> nodes;
  std::vector<std::pair<Leaf, V>> stack;
  for (std::size_t i = todo.size(); i-- > 0;) stack.push_back({todo[i], est[i]});
  while (!stack.empty()) {
    auto [f, whole] = stack.back();
    stack.pop_back();
    double um = 0.5 * (f.u0 + f.u1);
    Leaf l{f.A, f.B, f.u0, um, f.depth + 1}, r{f.A, f.B, um, f.u1, f.depth + 1};
    V vl = panel(l, nullptr), vr = panel(r, nullptr);
    bool ok = f.depth >= o.max_depth;
    if (!ok) {
      ok = true;
      for (std::size_t k = 0; k < K; ++k)
        if (!(std::abs(vl[k] + vr[k] - whole[k]) <= o.rtol * scale[k])) ok = false;
    }
    if (ok) {
      panel(l, &nodes);
      panel(r, &nodes);
    } else {
      stack.push_back({r, vr});
      stack.push_back({l, vl});
    }
  }
  return nodes;
}

// int_a^b rho^(s+1) d rho, stable as s + 2 -> 0
inline double radial_moment(double s, double a, double b) {
  if (!(b > a)) return 0;
  double q = s + 2;
  if (a <= 0) return q > 0 ? std::pow(b, q) / q : inf;
  double lr = std::log(a / b);
  if (std::abs(q * lr) < 1e-300) return -lr;
  return -std::pow(b, q) * std::expm1(q * lr) / q;
}

// ---- centred rules for |w - x|^s f(w) over a region ----

struct SingularOptions {
  int n_angular = 16;
  int n_radial = 8;
  int grading_levels = 20;
  double split_radius = 0.25;
  double outer_panel = 0.25;
  double rtol = 1e-10;
};

struct CenteredRule {
  std::vector<cplx> nodes;
  std::vector<double> weights;  // include |w - x|^s
  std::size_t size() const { return nodes.size(); }
};

inline CenteredRule build_centered_rule(const Region& reg, cplx x, double s, const SingularOptions& o = {}) {
  if (s <= -2) throw NonIntegrableError("integrate_singular: exponent s <= -2 is not integrable");
  AngularOptions ao;
  ao.n_gl = o.n_angular;
  ao.rtol = o.rtol;
  auto proxy = [&](double ph) {
    auto sp = ray_span(reg, x, ph);
    return std::array<double, 2>{radial_moment(s, sp.lo, sp.hi), radial_moment(0, sp.lo, sp.hi)};
  };
  auto ang = angular_nodes<2>(proxy, angular_breaks(reg, x), ao);
  auto gl = gauss_legendre(o.n_radial);
  CenteredRule cr;
  double eps = o.split_radius * std::ldexp(1.0, -o.grading_levels);
  double tail_w = 0;
  for (auto& a : ang) {
    auto sp = ray_span(reg, x, a.phi);
    if (sp.empty()) continue;
    cplx e = std::polar(1.0, a.phi);
    std::vector<double> edges;
    double lo = sp.lo;
    if (lo == 0) {
      double split = std::min(o.split_radius, sp.hi);
      lo = std::min(eps, 0.5 * split);
      tail_w += a.w * radial_moment(s, 0, lo);
    }
    edges.push_back(lo);
    for (double r = 2 * lo; r < std::min(o.split_radius, sp.hi); r *= 2) edges.push_back(r);
    double start = edges.back();
    if (sp.hi > start) {
      int np = std::max(1, int(std::ceil((sp.hi - start) / o.outer_panel)));
      for (int p = 1; p <= np; ++p) edges.push_back(start + (sp.hi - start) * p / np);
    }
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
      double h = 0.5 * (edges[k + 1] - edges[k]), m = 0.5 * (edges[k + 1] + edges[k]);
      for (int j = 0; j < o.n_radial; ++j) {
        double rho = m + h * gl.x[j];
        cr.nodes.push_back(x + rho * e);
        cr.weights.push_back(a.w * gl.w[j] * h * std::pow(rho, s + 1));
      }
    }
  }
  if (tail_w > 0) {
    cr.nodes.push_back(x);
    cr.weights.push_back(tail_w);
  }
  return cr;
}

template <class F>
cplx integrate_centered(const CenteredRule& cr, F&& f) {
  cplx t = 0;
  for (std::size_t k = 0; k < cr.size(); ++k) t += cr.weights[k] * cplx(f(cr.nodes[k]));
  return t;
}

// int over the unit disk of |w - w2|^s f(w) dA(w)
template <class F>
cplx integrate_singular(double s, cplx w2, F&& f, const SingularOptions& o = {}) {
  return integrate_centered(build_centered_rule(unit_disk_region(), w2, s, o), f);
}

// ---- Monte Carlo ----

enum class McRegion { disk, bidisk, G };

struct McResult {
  double estimate = 0, std_error = 0;
  std::size_t n = 0;
};

class McSampler {
 public:
  explicit McSampler(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }
  cplx disk_point() {
    for (;;) {
      cplx w(2 * uniform() - 1, 2 * uniform() - 1);
      if (std::norm(w) < 1) return w;
    }
  }

 private:
  std::mt19937_64 eng_;
};

struct Welford {
  std::size_t n = 0;
  double mean = 0, m2 = 0;
  void add(double x) {
    ++n;
    double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }
  double var() const { return n > 1 ? m2 / (n - 1) : 0; }
};

// f takes cplx (disk), BidiskPoint (bidisk) or GPoint (G) and returns a real
template <class F>
McResult monte_carlo(McRegion region, std::size_t n, std::uint64_t seed, F&& f) {
  if (n < 1000) throw std::invalid_argument("monte_carlo: need n >= 1000");
  McSampler rng(seed);
  Welford acc;
  double vol = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (region == McRegion::disk) {
      if constexpr (std::invocable<F, cplx>) acc.add(f(rng.disk_point()));
      vol = pi;
    } else {
      BidiskPoint b{rng.disk_point(), rng.disk_point()};
      if (region == McRegion::bidisk) {
        if constexpr (std::invocable<F, BidiskPoint>) acc.add(f(b));
        vol = pi * pi;
      } else {
        if constexpr (std::invocable<F, GPoint>) acc.add(f(phi(b)) * std::norm(jacobian(b)));
        vol = pi * pi / 2;
      }
    }
  }
  return {vol * acc.mean, vol * std::sqrt(acc.var() / n), n};
}

}  // namespace bergman
