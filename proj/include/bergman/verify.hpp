#pragma once

#include <chrono>
#include <cstdio>
#include <map>

#include "harness.hpp"

namespace bergman::harness {

struct Check {
  bool pass = false;
  double value = 0, tolerance = 0;
  std::string note;
};

struct Invariant {
  std::string suite, name;
  std::function<Check(const Config&)> run;
};

inline const std::map<std::string, int>& expected_invariant_counts() {
  static const std::map<std::string, int> m{{"domain", 5},         {"kernels", 5},   {"quadrature", 3},
                                            {"weights", 2},        {"bekolle_bonami", 4}, {"operators", 5},
                                            {"symbolic", 4},       {"harness", 3}};
  return m;
}

inline Check upper(double v, double tol, std::string note = "") { return {v < tol, v, tol, std::move(note)}; }

inline std::vector<BidiskPoint> random_pairs(std::size_t n, std::uint64_t seed, double rmax = 1) {
  McSampler rng(seed);
  std::vector<BidiskPoint> v;
  for (std::size_t k = 0; k < n; ++k) v.push_back({rmax * rng.disk_point(), rmax * rng.disk_point()});
  return v;
}

// ---- domain ----

inline Check inv_preimage_roundtrip(const Config& c) {
  McSampler rng(c.require_seed());
  double worst = 0;
  for (int k = 0; k < 1000; ++k) {
    cplx z1 = 2.0 * rng.disk_point(), z2 = 2.0 * rng.disk_point();
    auto [a, b] = phi_preimage(z1, z2);
    GPoint z = phi({a, b});
    worst = std::max({worst, std::abs(z.z1 - z1) / std::max(1.0, std::abs(z1)),
                      std::abs(z.z2 - z2) / std::max(1.0, std::abs(z2))});
  }
  return upper(worst, 1e-12);
}

inline Check inv_in_G(const Config& c) {
  McSampler rng(c.require_seed() + 1);
  double rmax = 1 - 1e-9;
  int bad = 0, n = 0;
  auto test = [&](cplx a, cplx b) {
    ++n;
    if (!in_G(phi({a, b}))) ++bad;
  };
  for (int k = 0; k < 1000; ++k) test(rmax * rng.disk_point(), rmax * rng.disk_point());
  for (int k = 0; k < 200; ++k)
    test(std::polar(rmax, 2 * pi * rng.uniform()), std::polar(rmax * rng.uniform(), 2 * pi * rng.uniform()));
  for (int k = 0; k < 100; ++k) {
    cplx w = std::polar(0.9, 2 * pi * rng.uniform());
    test(w, w);
  }
  return {bad == 0, double(bad), 0, std::to_string(n) + " points"};
}

inline Check inv_pullback_identity(const Config& c) {
  double worst = 0;
  for (auto& b : random_pairs(1000, c.require_seed() + 2)) {
    double j2 = std::norm(jacobian(b));
    if (j2 < 0.05 * 0.05) continue;
    worst = std::max(worst, std::abs(std::exp(-delta_weight(phi(b))) - j2) / j2);
  }
  return upper(worst, 1e-12);
}

inline Check inv_indicator_area(const Config&) {
  auto q = build_polar_rule(512, 1024);
  double worst = 0;
  for (double R : {1.0, 0.8, 0.5, 0.25}) {
    TentSpec t = tent_of_radius(R, 0.7);
    double s = 0;
    for (std::size_t k = 0; k < q.size(); ++k)
      if (tent_contains(t, q.nodes[k])) s += q.weights[k];
    worst = std::max(worst, std::abs(s - tent_area(t)) / tent_area(t));
  }
  return upper(worst, 0.01);
}

inline Check inv_envelope(const Config&) {
  double lo = 2 * pi / 3 - std::sqrt(3.0) / 2, mn = inf, mx = 0;
  for (double R : {1.0, 0.5, 0.1, 0.01, 0.001}) {
    double r = tent_area(tent_of_radius(R)) / (R * R);
    mn = std::min(mn, r);
    mx = std::max(mx, r);
  }
  double r1 = lens_area(1.0);
  mn = std::min(mn, r1);
  mx = std::max(mx, r1);
  return {mn >= lo * (1 - 1e-12) && mx <= pi * (1 + 1e-12), mn, lo, "max " + fmt(mx)};
}

// ---- kernels ----

inline Check inv_reproducing(const Config& c) {
  auto q = build_polar_rule(c.quad);
  double worst = 0;
  for (int k = 0; k <= 10; ++k) {
    auto P = project_disk(sample(q, [k](cplx e) { return ipow(e, k); }));
    for (double r : {0.0, 0.3, 0.6, 0.8})
      for (int j = 0; j < 8; ++j) {
        cplx w = std::polar(r, 2 * pi * j / 8 + 0.1);
        cplx ex = ipow(w, k);
        double err = std::abs(P(w) - ex);
        worst = std::max(worst, ex == cplx(0) ? err : err / std::abs(ex));
      }
  }
  return upper(worst, 1e-6);
}

inline Check inv_root_order(const Config& c) {
  auto zs = random_pairs(100, c.require_seed() + 3);
  auto es = random_pairs(100, c.require_seed() + 4);
  double worst = 0;
  for (std::size_t k = 0; k < zs.size(); ++k) {
    auto [w1, w2] = zs[k];
    auto [e1, e2] = es[k];
    cplx g = g_kernel_preimages(w1, w2, e1, e2);
    for (cplx h : {g_kernel_preimages(w2, w1, e1, e2), g_kernel_preimages(w1, w2, e2, e1),
                   g_kernel_preimages(w2, w1, e2, e1), g_kernel(phi(zs[k]), phi(es[k]))})
      worst = std::max(worst, std::abs(g - h) / std::abs(g));
  }
  return upper(worst, 1e-12);
}

inline Check inv_partial_kernel(const Config&) {
  double worst = 0;
  for (int b = 0; b <= 5; ++b)
    for (double r1 : {0.0, 0.3, 0.6, 0.9})
      for (double r2 : {0.0, 0.45, 0.9})
        for (int j = 0; j < 12; ++j) {
          cplx w = std::polar(r1, 0.3 * j), e = std::polar(r2, -0.7 * j + 0.2);
          worst = std::max(worst, std::abs(partial_kernel(b, w, e) - partial_kernel_series(b, w, e)));
        }
  return upper(worst, 1e-10);
}

inline Check inv_derivative_transfer(const Config& c) {
  McSampler rng(c.require_seed() + 5);
  double worst = 0;
  int n = 0;
  while (n < 100) {
    cplx w = rng.disk_point(), e = rng.disk_point();
    if (std::abs(w) < 0.05) continue;
    ++n;
    for (int b = 0; b <= 3; ++b) {
      cplx l = kernel_w_derivative(b, w, e), r = ipow(std::conj(e) / w, b) * kernel_etabar_derivative(b, w, e);
      worst = std::max(worst, std::abs(l - r) / std::abs(l == cplx(0) ? cplx(1) : l));
    }
  }
  return upper(worst, 1e-8);
}

inline Check inv_hermitian(const Config& c) {
  auto a = random_pairs(100, c.require_seed() + 6), b = random_pairs(100, c.require_seed() + 7);
  double worst = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    cplx x = disk_kernel(a[k].w1, b[k].w1), y = disk_kernel(b[k].w1, a[k].w1);
    worst = std::max(worst, std::abs(x - std::conj(y)) / std::abs(x));
    cplx g = g_kernel(phi(a[k]), phi(b[k])), h = g_kernel(phi(b[k]), phi(a[k]));
    worst = std::max(worst, std::abs(g - std::conj(h)) / std::abs(g));
  }
  return upper(worst, 1e-12);
}

// ---- quadrature ----

inline Check inv_exactness(const Config&) {
  double worst = 0;
  for (auto [nr, nt] : {std::pair{8, 16}, std::pair{16, 32}, std::pair{32, 64}}) {
    auto q = build_polar_rule(nr, nt);
    int top = std::min(2 * nr - 2, nt / 2 - 1);
    for (int a = 0; a <= top; ++a)
      for (int b = 0; b <= top; ++b) {
        cplx v = integrate(q, [&](cplx w) { return ipow(w, a) * ipow(std::conj(w), b); });
        double ex = a == b ? pi / (a + 1) : 0;
        worst = std::max(worst, std::abs(v - ex) / (a == b ? ex : 1.0));
      }
  }
  return upper(worst, 1e-10, "n_theta = 2 n_r");
}

inline Check inv_singular_convergence(const Config&) {
  double worst = 0;
  for (cplx w2 : {cplx(0), cplx(0.7), cplx(0, 0.95)}) {
    SingularOptions a, b;
    b.split_radius = a.split_radius / 2;
    cplx x = integrate_singular(-1, w2, [](cplx) { return 1.0; }, a);
    cplx y = integrate_singular(-1, w2, [](cplx) { return 1.0; }, b);
    worst = std::max(worst, std::abs(x - y) / std::abs(x));
  }
  return upper(worst, 1e-4);
}

inline Check inv_mc_scaling(const Config& c) {
  std::uint64_t s = c.require_seed() + 8;
  auto f = [](cplx w) { return std::norm(w); };
  double e4 = monte_carlo(McRegion::disk, 10000, s, f).std_error;
  double e5 = monte_carlo(McRegion::disk, 100000, s, f).std_error;
  double e6 = monte_carlo(McRegion::disk, 1000000, s, f).std_error;
  double r1 = e4 / e5 / std::sqrt(10.0), r2 = e5 / e6 / std::sqrt(10.0);
  double dev = std::max(std::abs(r1 - 1), std::abs(r2 - 1));
  return upper(dev, 0.1, "SE ratios / sqrt(10): " + fmt(r1) + ", " + fmt(r2));
}

// ---- weights ----

inline Check inv_dual_involution(const Config&) {
  WeightSpec s = WeightSpec::pair_power(2, 0.5);
  auto grid = make_tent_grid(0.5, 1e-3, 0);
  double bp = bp_constant(s, 3, grid).value;
  double bq = bp_constant(dual_weight(s, 3), 1.5, grid).value;
  double rel = std::abs(bp - std::pow(bq, 2)) / bp;
  return upper(rel, 1e-6, "B_3 " + fmt(bp) + ", B_1.5(dual)^2 " + fmt(bq * bq));
}

inline Check inv_integrability_gate(const Config&) {
  bool ok = true;
  try {
    integrate_singular(-2, 0.3, [](cplx) { return 1.0; });
    ok = false;
  } catch (const NonIntegrableError&) {
  }
  try {
    integrate_singular(-2.5, 0.3, [](cplx) { return 1.0; });
    ok = false;
  } catch (const NonIntegrableError&) {
  }
  ok = ok && std::isfinite(integrate_singular(-1.99, 0.3, [](cplx) { return 1.0; }).real());
  TentSpec t = tent_of_radius(0.2, 0);
  cplx w2 = t.apex();
  try {
    tent_average(WeightSpec::pair_power(-2, w2), t);
    ok = false;
  } catch (const NonIntegrableError&) {
  }
  ok = ok && std::isfinite(tent_average(WeightSpec::pair_power(-1.9, w2), t));
  // dual of 2-p is -(2-p)/(p-1): finite above p = 4/3, infinite at and below
  WeightSpec f = WeightSpec::pair_power(2, w2, -1);
  ok = ok && bp_quotient(f, 4.0 / 3.0, t) == inf && bp_quotient(f, 1.3, t) == inf;
  ok = ok && std::isfinite(bp_quotient(f, 1.34, t));
  ok = ok && regime_bound(f, 4.0 / 3.0, Regime::near_small) == inf && std::isfinite(regime_bound(f, 1.34, Regime::near_small));
  return {ok, ok ? 0.0 : 1.0, 0};
}

// ---- bekolle_bonami ----

inline Check inv_regime_bounds(const Config& c) {
  double worst = 0;
  std::string where;
  auto run = [&](WeightSpec sp, double p, cplx w2) {
    sp.w2 = w2;
    auto e = bp_constant(sp, p, make_tent_grid(w2, 1e-3, 0));
    for (auto& r : e.rows) {
      if (r.empty) continue;
      double b = regime_bound(sp, p, regime_classify(r.tent, w2, c.delta0), c.delta0);
      if (r.quotient / b > worst) {
        worst = r.quotient / b;
        where = sp.str() + " p=" + fmt(p);
      }
    }
  };
  for (cplx w2 : {cplx(0.5), cplx(0, 0.9)}) {
    for (double p : {2.5, 3.0, 4.0}) run(WeightSpec::pair_power(2, 0), p, w2);
    for (double p : {1.5, 2.0, 3.0, 3.9}) run(WeightSpec::pair_power(2, 0, -1), p, w2);
  }
  return {worst <= 1.05, worst, 1.05, where};
}

inline Check inv_bp_spread(const Config& c) {
  std::vector<double> v;
  for (double r : {0.0, 0.5, 0.9, 0.99})
    for (cplx u : {cplx(1), cplx(0, 1), std::polar(1.0, pi / 4)}) {
      if (r == 0 && u != cplx(1)) continue;
      cplx w2 = r * u;
      v.push_back(bp_constant(WeightSpec::pair_power(2, w2), 3, make_tent_grid(w2, c.rmin, 1)).value);
    }
  double mn = *std::min_element(v.begin(), v.end()), mx = *std::max_element(v.begin(), v.end());
  double spread = (mx - mn) / mx;
  return {spread < 0.1, spread, 0.1, "min " + fmt(mn) + " max " + fmt(mx)};
}

inline Check inv_divergence(const Config& c) {
  auto a = sharpness_ladder(WeightSpec::pair_power(2, 0.5), 2, 0.5, c.ladder);
  auto b = sharpness_ladder(WeightSpec::pair_power(2, 0.5, -1), 4.5, 0.5, c.ladder);
  double g = std::min(a.growth, b.growth);
  return {a.growth >= 10 && b.growth >= 10, g, 10, "s=2,p=2 x" + fmt(a.growth) + "; s=2-p,p=4.5 x" + fmt(b.growth)};
}

inline Check inv_jensen(const Config&) {
  double mn = inf;
  std::vector<std::pair<WeightSpec, double>> cases = {
      {WeightSpec::pair_power(2, 0), 3},       {WeightSpec::pair_power(2, 0), 2},
      {WeightSpec::pair_power(2, 0, -1), 1.5}, {WeightSpec::pair_power(2, 0, -1), 3.9},
      {WeightSpec::pair_power(-1, 0), 3},      {WeightSpec::pair_power(0.7, 0), 1.8},
      {WeightSpec::constant(2.5), 3}};
  for (cplx w2 : {cplx(0.5), cplx(0.9, 0.05)})
    for (auto [sp, p] : cases) {
      sp.w2 = w2;
      for (auto& r : bp_constant(sp, p, make_tent_grid(w2, 1e-3, 0)).rows)
        if (!r.empty) mn = std::min(mn, r.quotient);
    }
  return {mn >= 1 - 1e-12, mn, 1};
}

// ---- operators ----

inline Check inv_idempotence(const Config& c) {
  auto q = build_polar_rule(c.quad);
  auto P = project_disk(sample(q, [](cplx e) { return std::conj(e) * e * e; }));
  GridFunction g{&q, P.on_rule()};
  auto PP = project_disk(g);
  auto a = P.on_rule(), b = PP.on_rule();
  double num = 0, den = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    num = std::max(num, std::abs(a[k] - b[k]));
    den = std::max(den, std::abs(a[k]));
  }
  return upper(num / den, 1e-6);
}

inline Check inv_bell_consistency(const Config& c) {
  std::uint64_t seed = c.require_seed();
  symbolic::MixedPoly z1 = symbolic::MixedPoly::variable(0), cz1 = symbolic::MixedPoly::variable(1);
  ZPoly f(z1 * cz1);
  auto h = [&](GPoint z) { return eval_z(f, z); };
  auto g = project_G(h);
  auto pts = sample_bidisk(c.mc, seed + 9);
  auto zs = random_g_points(10, seed + 10);
  auto mcs = parallel_map(zs.size(), [&](std::size_t k) { return mc_g_projection(pts, h, zs[k]); });
  double worst = 0;
  for (std::size_t k = 0; k < zs.size(); ++k) worst = std::max(worst, std::abs(g(zs[k]) - mcs[k].estimate) / mcs[k].se());
  return {worst <= 3, worst, 3, "max discrepancy in SE units"};
}

inline Check inv_monotone(const Config& c) {
  auto q = build_polar_rule(64, 128);
  auto fam = test_family(c.require_seed(), 20);
  std::vector<double> est;
  for (std::size_t n : {std::size_t(7), std::size_t(25), std::size_t(32), fam.size()}) {
    std::vector<TestFunction> sub(fam.begin(), fam.begin() + n);
    est.push_back(opnorm_lower_bound(false, 3, WeightSpec::pair_power(2, 0.5), sub, q).value);
  }
  bool ok = std::is_sorted(est.begin(), est.end());
  return {ok, est.back(), 0, "first " + fmt(est.front())};
}

inline Check inv_bracketing(const Config& c) {
  auto q = build_polar_rule(c.quad);
  auto fam = test_family(c.require_seed(), 20);
  WeightSpec s = WeightSpec::pair_power(2, 0.5);
  double b = opnorm_lower_bound(false, 3, s, fam, q).value;
  double bp = opnorm_lower_bound(true, 3, s, fam, q).value;
  double B = bp_constant(s, 3, make_tent_grid(0.5, c.rmin, 0)).value;
  double cst = b / std::pow(B, 1.0 / 6);
  bool ok = std::isfinite(b) && std::isfinite(bp) && b <= bp;
  return {ok, cst, 0, "B " + fmt(b) + " <= B+ " + fmt(bp) + "; c = B / B_3^(1/6)"};
}

inline Check inv_pointwise(const Config& c) {
  auto q = build_polar_rule(64, 128);
  auto fam = test_family(c.require_seed(), 20);
  auto worst = parallel_map(fam.size(), [&](std::size_t t) {
    auto& f = fam[t].f;
    auto P = project_disk(sample(q, f));
    auto Pp = project_disk(sample(q, [&](cplx e) { return cplx(std::abs(f(e))); }), true);
    auto a = P.on_rule(), b = Pp.on_rule();
    double scale = 0;
    for (auto& v : b) scale = std::max(scale, std::abs(v));
    double w = 0;
    for (std::size_t k = 0; k < a.size(); ++k) w = std::max(w, (std::abs(a[k]) - b[k].real() * (1 + 1e-9)) / scale);
    return w;
  });
  double m = *std::max_element(worst.begin(), worst.end());
  return {m <= 1e-12, m, 1e-12, "max (|Bf| - B+|f|) / max B+|f|"};
}

// ---- symbolic ----

inline Check inv_dz_expansion(const Config&) {
  int bad = 0, n = 0;
  for (int a1 = 0; a1 <= 3; ++a1)
    for (int a2 = 0; a1 + a2 <= 3; ++a2) {
      if (a1 + a2 == 0) continue;
      auto e = symbolic::dz_expansion({a1, a2});
      for (int i = 0; i <= 4; ++i)
        for (int j = 0; i + j <= 4; ++j) {
          auto f = symbolic::BivarPoly::monomial({i, j});
          ++n;
          if (!(symbolic::apply_expansion(e, f) == symbolic::dz_direct({a1, a2}, f))) ++bad;
        }
    }
  return {bad == 0, double(bad), 0, std::to_string(n) + " cases, exact"};
}

inline Check inv_degree_bounds(const Config&) {
  int bad = 0;
  for (int a1 = 0; a1 <= 3; ++a1)
    for (int a2 = 0; a1 + a2 <= 3; ++a2) {
      if (a1 + a2 == 0) continue;
      auto e = symbolic::dz_expansion({a1, a2});
      int n = a1 + a2;
      if (e.m != 2 * n - 1) ++bad;
      for (auto& [b, P] : e.terms)
        if (P.degree() > 2 * n - 1) ++bad;
    }
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; a + b <= 3; ++b)
      for (int cc = 0; a + b + cc <= 3; ++cc)
        for (int d = 0; a + b + cc + d <= 3; ++d) {
          auto e = symbolic::dwbar_expansion({a, b, cc, d});
          for (auto& [al, P] : e.terms)
            if (P.degree() > a + b + cc + d) ++bad;
        }
  return {bad == 0, double(bad), 0};
}

inline Check inv_round_trip(const Config&) {
  auto e = symbolic::dwbar_expansion({1, 0, 0, 0});
  int bad = 0, n = 0;
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; i + j <= 4; ++j) {
      auto q = symbolic::pullback(symbolic::BivarPoly::monomial({i, j}));
      ++n;
      if (!(symbolic::compose_first_order(e, q) == symbolic::RationalFunction{q.derivative(0), 0})) ++bad;
    }
  return {bad == 0, double(bad), 0, std::to_string(n) + " polynomials"};
}

inline Check inv_stirling_tangential(const Config&) {
  bool st = symbolic::stirling_identity_check(5, 10);
  bool found = false;
  for (auto& r : symbolic::tangential_report(2, 2))
    if (r.m == 1 && r.beta == 1)
      found = !r.equal && r.lhs == symbolic::GaussRational(1) && r.rhs == symbolic::GaussRational(-1);
  return {st && found, st && found ? 0.0 : 1.0, 0, "tangential (m, beta) = (1, 1): lhs 1, rhs -1"};
}

// ---- harness ----

inline Config small_config() {
  Config c = default_config("bb-sweep");
  c.p = {3};
  c.w2 = {0.5};
  c.rmin = 1e-2;
  c.grid_levels = 1;
  c.ladder = {1e-1, 1e-2};
  c.mc = 10000;
  c.bell_points = 2;
  c.tent_radii = {1, 0.1};
  return c;
}

inline Check inv_determinism(const Config& c) {
  Config s = small_config();
  s.seed = c.require_seed();
  bool same = cmd_bb_sweep(s).text == cmd_bb_sweep(s).text;
  same = same && cmd_bell_check(s).text == cmd_bell_check(s).text;
  return {same, same ? 0.0 : 1.0, 0};
}

inline Check inv_csv_provenance(const Config& c) {
  Config s = small_config();
  s.seed = c.require_seed();
  int bad = 0, rows = 0;
  for (auto& text : {cmd_bb_sweep(s).text, cmd_bell_check(s).text, cmd_tent_area(s).text}) {
    Table t = parse_csv(text);
    for (auto& r : t.rows) {
      ++rows;
      if (r[t.col("config_hash")].size() != 16 || r[t.col("seed")].empty() || r[t.col("rule")].empty()) ++bad;
    }
  }
  return {bad == 0 && rows > 0, double(bad), 0, std::to_string(rows) + " rows"};
}

inline std::vector<Invariant> registry();

inline Check inv_registry_count(const Config&) {
  std::map<std::string, int> got;
  auto r = registry();
  for (auto& i : r) ++got[i.suite];
  bool ok = got == expected_invariant_counts() && r.size() == 31;
  return {ok, double(r.size()), 31};
}

inline std::vector<Invariant> registry() {
  return {
      {"domain", "preimage_roundtrip", inv_preimage_roundtrip},
      {"domain", "in_G_of_phi", inv_in_G},
      {"domain", "pullback_delta_identity", inv_pullback_identity},
      {"domain", "indicator_vs_tent_area", inv_indicator_area},
      {"domain", "tent_area_envelope", inv_envelope},
      {"kernels", "reproducing_property", inv_reproducing},
      {"kernels", "root_order_independence", inv_root_order},
      {"kernels", "partial_kernel_closed_vs_series", inv_partial_kernel},
      {"kernels", "derivative_transfer", inv_derivative_transfer},
      {"kernels", "hermitian_symmetry", inv_hermitian},
      {"quadrature", "exactness_degree", inv_exactness},
      {"quadrature", "singular_split_convergence", inv_singular_convergence},
      {"quadrature", "mc_standard_error_scaling", inv_mc_scaling},
      {"weights", "dual_involution", inv_dual_involution},
      {"weights", "integrability_gate", inv_integrability_gate},
      {"bekolle_bonami", "regime_bounds", inv_regime_bounds},
      {"bekolle_bonami", "uniform_in_w2", inv_bp_spread},
      {"bekolle_bonami", "divergence_outside_range", inv_divergence},
      {"bekolle_bonami", "jensen_floor", inv_jensen},
      {"operators", "idempotence", inv_idempotence},
      {"operators", "bell_monte_carlo", inv_bell_consistency},
      {"operators", "monotone_in_family", inv_monotone},
      {"operators", "norm_bracketing", inv_bracketing},
      {"operators", "pointwise_domination", inv_pointwise},
      {"symbolic", "dz_expansion_exact", inv_dz_expansion},
      {"symbolic", "degree_bounds", inv_degree_bounds},
      {"symbolic", "first_order_round_trip", inv_round_trip},
      {"symbolic", "stirling_and_tangential_report", inv_stirling_tangential},
      {"harness", "determinism", inv_determinism},
      {"harness", "csv_provenance", inv_csv_provenance},
      {"harness", "registry_count", inv_registry_count},
  };
}

// runs every invariant; the report lists them all, the exit code names the first failure
inline Outcome cmd_verify(const Config& c, bool progress = true) {
  c.require_seed();
  Outcome out;
  for (auto& inv : registry()) {
    auto t0 = std::chrono::steady_clock::now();
    Check k;
    try {
      k = inv.run(c);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      k = {false, 0, 0, std::string("exception: ") + e.what()};
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (progress)
      std::fprintf(stderr, "%s %s/%s value=%s tol=%s (%.1fs)%s%s\n", k.pass ? "PASS" : "FAIL", inv.suite.c_str(),
                   inv.name.c_str(), fmt(k.value).c_str(), fmt(k.tolerance).c_str(), dt, k.note.empty() ? "" : " ",
                   k.note.c_str());
    out.checks.push_back({inv.suite, inv.name, k.pass, k.value, k.tolerance, k.note});
  }
  out.text = report_json(out.checks).dump(2) + "\n";
  out.finish();
  return out;
}

}  // namespace bergman::harness
