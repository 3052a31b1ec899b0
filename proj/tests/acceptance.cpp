#include <bergman/verify.hpp>

#include <chrono>
#include <cstdio>

using namespace bergman;
using namespace bergman::harness;

namespace {

using clk = std::chrono::steady_clock;

double seconds_since(clk::time_point t0) { return std::chrono::duration<double>(clk::now() - t0).count(); }

struct Line {
  bool pass;
  std::string detail;
};

Line reproducing() {
  auto t0 = clk::now();
  auto q = build_polar_rule(128, 256);
  double worst = 0;
  for (int k = 0; k <= 10; ++k) {
    auto P = project_disk(sample(q, [k](cplx e) { return ipow(e, k); }));
    for (double r : {0.1, 0.4, 0.8})
      for (int j = 0; j < 16; ++j) {
        cplx w = std::polar(r, 2 * pi * j / 16 + 0.05), ex = ipow(w, k);
        worst = std::max(worst, std::abs(P(w) - ex) / std::abs(ex));
      }
  }
  double dt = seconds_since(t0);
  return {worst < 1e-6 && dt < 10, "max rel err " + fmt(worst) + ", " + fmt(dt) + " s"};
}

Line partial_kernel_identity() {
  double worst = 0;
  for (int b = 0; b <= 5; ++b)
    for (int i = 0; i <= 9; ++i)
      for (int j = 0; j <= 9; ++j)
        for (int a = 0; a < 8; ++a) {
          cplx w = std::polar(0.1 * i, 0.8 * a), e = std::polar(0.1 * j, -0.5 * a + 0.3);
          worst = std::max(worst, std::abs(partial_kernel(b, w, e) - partial_kernel_series(b, w, e)));
        }
  return {worst < 1e-10, "max |diff| " + fmt(worst)};
}

Line transfer_identity() {
  McSampler rng(2024);
  double worst = 0;
  int n = 0;
  while (n < 100) {
    cplx w = rng.disk_point(), e = rng.disk_point();
    if (std::abs(w) < 0.05) continue;
    ++n;
    for (int b = 0; b <= 3; ++b) {
      cplx l = kernel_w_derivative(b, w, e), r = ipow(std::conj(e) / w, b) * kernel_etabar_derivative(b, w, e);
      worst = std::max(worst, std::abs(l - r) / std::abs(l));
    }
  }
  return {worst < 1e-8, "max rel err " + fmt(worst)};
}

struct RangeResult {
  bool finite = true, stable = true, bounded = true, far_ok = true;
  double worst_change = 0, worst_ratio = 0, worst_far = 0;
};

RangeResult range_check(const WeightSpec& base, const std::vector<double>& ps, const std::vector<cplx>& ws) {
  RangeResult r;
  for (double p : ps)
    for (cplx w2 : ws) {
      WeightSpec sp = base;
      sp.w2 = w2;
      auto e = bp_refine(sp, p, w2, 1e-4, 2);
      r.finite = r.finite && std::isfinite(e.value);
      double ch = std::abs(e.history[1] - e.history[0]) / e.history[1];
      r.worst_change = std::max(r.worst_change, ch);
      r.stable = r.stable && ch < 0.05;
      double far = regime_bound(sp, p, Regime::far);
      for (auto& row : e.rows) {
        if (row.empty) continue;
        Regime g = regime_classify(row.tent, w2);
        double ratio = row.quotient / regime_bound(sp, p, g);
        r.worst_ratio = std::max(r.worst_ratio, ratio);
        r.bounded = r.bounded && ratio <= 1.05;
        if (g == Regime::far) {
          r.worst_far = std::max(r.worst_far, row.quotient / far);
          r.far_ok = r.far_ok && row.quotient <= 1.05 * far;
        }
      }
    }
  return r;
}

Line prop_12_range() {
  auto r = range_check(WeightSpec::pair_power(2, 0), {3},
                       {0.0, 0.5, 0.9, 0.99, cplx(0, 0.5), cplx(0, 0.9), cplx(0, 0.99)});
  return {r.finite && r.stable && r.bounded && r.far_ok,
          "max refinement change " + fmt(r.worst_change) + ", max quotient/bound " + fmt(r.worst_ratio) +
              ", max far quotient/(11/9)^2 " + fmt(r.worst_far)};
}

Line sharpness() {
  std::vector<double> radii = {1e-1, 1e-2, 1e-3, 1e-4};
  auto a = sharpness_ladder(WeightSpec::pair_power(2, 0.5), 2, 0.5, radii);
  auto b = sharpness_ladder(WeightSpec::pair_power(2, 0.5, -1), 4.5, 0.5, radii);
  return {a.growth >= 10 && b.growth >= 10,
          "growth (s=2,p=2) x" + fmt(a.growth) + ", (s=2-p,p=4.5) x" + fmt(b.growth)};
}

Line prop_13_range() {
  auto r = range_check(WeightSpec::pair_power(2, 0, -1), {1.5, 2, 3, 3.9}, {0.5, 0.9, cplx(0, 0.99)});
  return {r.finite && r.stable && r.far_ok,
          "max refinement change " + fmt(r.worst_change) + ", max far quotient/(11/9)^|2-p| " + fmt(r.worst_far)};
}

Line bell() {
  auto o = cmd_bell_check(default_config("bell-check"));
  std::string d;
  for (auto& c : o.checks) d += (d.empty() ? "" : ", ") + c.name + " " + fmt(c.value);
  return {o.code == 0, d};
}

Line dz_calculus() {
  Config c = default_config("verify");
  auto k = inv_dz_expansion(c);
  return {k.pass, k.note + ", mismatches " + fmt(k.value)};
}

Line tangential_diagnostic() {
  bool row = false;
  for (auto& r : symbolic::tangential_report(1, 1))
    if (r.m == 1 && r.beta == 1)
      row = !r.equal && r.lhs == symbolic::GaussRational(1) && r.rhs == symbolic::GaussRational(-1);
  bool st = symbolic::stirling_identity_check(5, 10);
  return {row && st, std::string("(1,1) lhs 1 rhs -1: ") + (row ? "yes" : "no") + ", stirling(5,10): " +
                         (st ? "true" : "false")};
}

Line sobolev() {
  auto o = cmd_sobolev_check(default_config("sobolev-check"));
  return {o.code == 0, "max drift " + fmt(o.checks.front().value)};
}

Line tents() {
  auto o = cmd_tent_area(default_config("tent-area"));
  std::string d;
  for (auto& c : o.checks) d += (d.empty() ? "" : ", ") + c.name + " " + fmt(c.value);
  return {o.code == 0 && o.checks.size() == 3, d};
}

Line verify() {
  auto t0 = clk::now();
  auto o = cmd_verify(default_config("verify"), false);
  double dt = seconds_since(t0);
  std::string d = "exit " + std::to_string(o.code) + ", " + fmt(dt) + " s";
  if (o.code) d += ", first failing " + o.first_failure();
  return {o.code == 0 && dt < 900, d};
}

}  // namespace

int main() {
  std::vector<std::pair<const char*, Line (*)()>> criteria = {
      {"reproducing property", reproducing},
      {"partial kernel identity", partial_kernel_identity},
      {"derivative transfer identity", transfer_identity},
      {"Bekolle-Bonami s=2 p=3 range", prop_12_range},
      {"sharpness outside the ranges", sharpness},
      {"s=2-p range", prop_13_range},
      {"Bell transformation", bell},
      {"dz expansion calculus", dz_calculus},
      {"tangential operator diagnostic", tangential_diagnostic},
      {"Sobolev ratio stability", sobolev},
      {"tent geometry", tents},
      {"full verify suite", verify},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    auto t0 = clk::now();
    Line l;
    try {
      l = criteria[k].second();
    } catch (const std::exception& e) {
      l = {false, std::string("exception: ") + e.what()};
    }
    if (!l.pass) ++failed;
    std::printf("%s %zu %s: %s (%.1f s)\n", l.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, l.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
