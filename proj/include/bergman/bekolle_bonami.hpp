#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "domain.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "weights.hpp"

namespace bergman {

enum class Regime { far, near_small, near_large };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::far: return "far";
    case Regime::near_small: return "near_small";
    default: return "near_large";
  }
}

struct TentOptions {
  double floor = 0;  // excise the disk of this radius around w2 from the tent
  AngularOptions ang{};
};

// integrals over the tent (minus the floor disk) of |w-w2|^s, |w-w2|^sd and 1,
// all sharing the same angular nodes so the three measures are one discrete measure
struct TentMoments {
  double sigma = 0, dual = 0, area = 0;
};

inline TentMoments tent_moments(const TentSpec& t, cplx w2, double s, double sd, const TentOptions& o = {}) {
  Region reg = tent_region(t);
  TentMoments m;
  bool touches = o.floor <= 0 && region_closure_contains(reg, w2);
  auto g = [&](double ph) {
    auto sp = ray_span(reg, w2, ph);
    sp.lo = std::max(sp.lo, o.floor);
    if (sp.empty()) return std::array<double, 3>{0, 0, 0};
    double a = radial_moment(0, sp.lo, sp.hi);
    double b = touches && s <= -2 ? a : radial_moment(s, sp.lo, sp.hi);
    double c = touches && sd <= -2 ? a : radial_moment(sd, sp.lo, sp.hi);
    return std::array<double, 3>{b, c, a};
  };
  for (auto& n : angular_nodes<3>(g, angular_breaks(reg, w2), o.ang)) {
    auto v = g(n.phi);
    m.sigma += n.w * v[0];
    m.dual += n.w * v[1];
    m.area += n.w * v[2];
  }
  if (touches && s <= -2) m.sigma = inf;
  if (touches && sd <= -2) m.dual = inf;
  return m;
}

inline double tent_average(const WeightSpec& sp, const TentSpec& t, const TentOptions& o = {}) {
  if (sp.family == WeightFamily::constant) return sp.c;
  if (sp.family != WeightFamily::pair_power || sp.p_dependent())
    throw std::invalid_argument("tent_average: needs a constant or resolved pair_power weight");
  auto m = tent_moments(t, sp.w2, sp.s, 0, o);
  if (m.sigma == inf) throw NonIntegrableError("tent_average: weight not integrable on the tent");
  return m.sigma / m.area;
}

struct TentQuotient {
  TentSpec tent;
  double avg_sigma = 0, avg_dual = 0, quotient = 0;
  bool empty = false;
};

inline TentQuotient bp_quotient_detail(const WeightSpec& spec, double p, const TentSpec& t, const TentOptions& o = {}) {
  if (!(p > 1)) throw std::invalid_argument("bp_quotient: need p > 1");
  TentQuotient q{t};
  if (spec.family == WeightFamily::constant) {
    q.avg_sigma = spec.c;
    q.avg_dual = std::pow(spec.c, -1 / (p - 1));
    q.quotient = 1;
    return q;
  }
  WeightSpec sp = spec.at_p(p);
  if (sp.family != WeightFamily::pair_power) throw std::invalid_argument("bp_quotient: disk weight required");
  double sd = dual_weight(sp, p).s;
  auto m = tent_moments(t, sp.w2, sp.s, sd, o);
  if (!(m.area > 0)) {
    q.empty = true;
    return q;
  }
  q.avg_sigma = m.sigma / m.area;
  q.avg_dual = m.dual / m.area;
  q.quotient = (q.avg_sigma == inf || q.avg_dual == inf) ? inf : q.avg_sigma * std::pow(q.avg_dual, p - 1);
  return q;
}

inline double bp_quotient(const WeightSpec& spec, double p, const TentSpec& t, const TentOptions& o = {}) {
  return bp_quotient_detail(spec, p, t, o).quotient;
}

struct TentGrid {
  std::vector<TentSpec> tents;
  double r_min = 0;
  int level = 0;
};

// z = 0, lenses in the |z| -> 0 limit, a geometric R ladder with uniform phases, and tents aimed at w2
inline TentGrid make_tent_grid(cplx w2, double r_min, int level = 0) {
  TentGrid g;
  g.r_min = r_min;
  g.level = level;
  g.tents.push_back({0.0});
  double q = std::pow(2.0, -1.0 / (2 << level));
  int nph = 32 << level;
  for (int j = 0; j < nph; ++j) g.tents.push_back({std::polar(1e-9, 2 * pi * j / nph)});
  for (double R = q; R >= r_min * (1 - 1e-12); R *= q)
    for (int j = 0; j < nph; ++j) g.tents.push_back({std::polar(1 - R, 2 * pi * j / nph)});
  double d = 1 - std::abs(w2);
  if (d > 0) {
    double a = w2 == cplx(0) ? 0.0 : std::arg(w2);
    int no = (8 << level) + 1;
    for (double R = d / 8; R < 1 - 1e-9; R /= q)
      for (int k = 0; k < no; ++k) {
        double o = -1 + 2.0 * k / (no - 1);
        g.tents.push_back({std::polar(1 - R, a + o * R)});
      }
  }
  return g;
}

struct BpEstimate {
  double value = 0;
  TentSpec argmax{};
  std::size_t argmax_index = 0;
  int level = 0;
  double r_min = 0;
  std::vector<double> history;  // value per refinement level when refined
  std::vector<TentQuotient> rows;
};

inline BpEstimate bp_constant(const WeightSpec& spec, double p, const TentGrid& grid, const TentOptions& o = {}) {
  BpEstimate e;
  e.level = grid.level;
  e.r_min = grid.r_min;
  e.rows = parallel_map(grid.tents.size(), [&](std::size_t i) { return bp_quotient_detail(spec, p, grid.tents[i], o); });
  bool any = false;
  for (std::size_t i = 0; i < e.rows.size(); ++i) {
    auto& r = e.rows[i];
    if (r.empty) continue;
    if (!any || r.quotient > e.value) {
      e.value = r.quotient;
      e.argmax = r.tent;
      e.argmax_index = i;
      any = true;
    }
  }
  e.history.push_back(e.value);
  return e;
}

// estimates at levels 0..levels-1; the returned estimate is the finest one
inline BpEstimate bp_refine(const WeightSpec& spec, double p, cplx w2, double r_min, int levels,
                            const TentOptions& o = {}) {
  std::vector<double> hist;
  BpEstimate e;
  for (int L = 0; L < levels; ++L) {
    e = bp_constant(spec, p, make_tent_grid(w2, r_min, L), o);
    hist.push_back(e.value);
  }
  e.history = hist;
  return e;
}

inline Regime regime_classify(const TentSpec& t, cplx w2, double delta0 = 0.05) {
  double R = t.radius();
  if (!t.whole() && std::abs(w2 - t.apex()) >= 10 * R) return Regime::far;
  return R < delta0 ? Regime::near_small : Regime::near_large;
}

inline bool proved_family(const WeightSpec& sp) {
  return sp.family == WeightFamily::pair_power && sp.s == 2 && (sp.s_per_p == 0 || sp.s_per_p == -1);
}

// Far: 9R <= |w - w2| <= 11R on the tent, so the quotient is at most (11/9)^|s|.
// Near: the tent sits in D(w2, 20R) (small R, area >= A R^2) or in D(w2, 2) (R >= delta0).
inline double regime_bound(const WeightSpec& sp, double p, Regime r, double delta0 = 0.05) {
  if (!proved_family(sp)) throw std::invalid_argument("regime_bound: family must be pair_power with s = 2 or s = 2-p");
  double s = sp.exponent(p), sd = -s / (p - 1);
  if (r == Regime::far) return std::pow(11.0 / 9.0, std::abs(s));
  if (s <= -2 || sd <= -2) return inf;
  double rad, area;
  if (r == Regime::near_small) {
    rad = 20;
    area = lens_area(delta0) / (delta0 * delta0);
  } else {
    rad = 2;
    area = lens_area(delta0);
  }
  auto f = [&](double x) { return 2 * pi * std::pow(rad, x + 2) / ((x + 2) * area); };
  return f(s) * std::pow(f(sd), p - 1);
}

struct Sharpness {
  std::vector<double> radii, values, running_max;
  double growth = 0;
  bool exact_infinite = false;
  bool diverging = false;
};

// B_p with the disk of radius r around w2 excised, on grids reaching down to r
inline Sharpness sharpness_ladder(const WeightSpec& spec, double p, cplx w2, const std::vector<double>& radii,
                                  int level = 0) {
  Sharpness sh;
  sh.radii = radii;
  WeightSpec sp = spec.at_p(p);
  if (sp.family == WeightFamily::pair_power) sp.w2 = w2;
  double run = 0;
  for (double r : radii) {
    TentOptions o;
    o.floor = r;
    double v = bp_constant(sp, p, make_tent_grid(w2, r, level), o).value;
    run = std::max(run, v);
    sh.values.push_back(v);
    sh.running_max.push_back(run);
  }
  sh.growth = sh.running_max.back() / sh.running_max.front();
  sh.exact_infinite = bp_constant(sp, p, make_tent_grid(w2, radii.back(), level)).value == inf;
  sh.diverging = sh.exact_infinite || sh.growth >= 10;
  return sh;
}

}  // namespace bergman
