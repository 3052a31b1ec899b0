#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bekolle_bonami.hpp"
#include "domain.hpp"
#include "kernels.hpp"
#include "operators.hpp"
#include "quadrature.hpp"
#include "symbolic.hpp"
#include "weights.hpp"

namespace bergman::harness {

using json = nlohmann::json;

// exit code 2
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int schema_version = 1;

inline cplx parse_complex(std::string t) {
  std::string s;
  for (char c : t)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw ConfigError("bad complex number ''");
  try {
    std::size_t used;
    if (s.back() != 'i') {
      double re = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument("");
      return re;
    }
    std::string body = s.substr(0, s.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;)
      if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
        split = k;
        break;
      }
    auto im_part = [](const std::string& x) {
      if (x.empty() || x == "+") return 1.0;
      if (x == "-") return -1.0;
      std::size_t u;
      double v = std::stod(x, &u);
      if (u != x.size()) throw std::invalid_argument("");
      return v;
    };
    if (split == std::string::npos) return cplx(0, im_part(body));
    double re = std::stod(body.substr(0, split), &used);
    if (used != split) throw std::invalid_argument("");
    return cplx(re, im_part(body.substr(split)));
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    throw ConfigError("bad complex number '" + t + "'");
  }
}

inline std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char b[64];
  std::snprintf(b, sizeof b, "%.17g", x);
  return b;
}

inline std::string fmt_complex(cplx z) {
  std::string s = fmt(z.real());
  if (z.imag() >= 0 || std::isnan(z.imag())) s += "+";
  return s + fmt(z.imag()) + "i";
}

struct Config {
  std::string command;
  std::optional<std::uint64_t> seed;
  std::vector<double> p;  // empty: the command's own default
  std::string weight;     // empty: the command's own default
  std::vector<cplx> w2;
  double rmin = 1e-4;
  std::string quad = "128x256";
  std::string quad_fine = "192x384";
  std::size_t mc = 1000000;
  int grid_levels = 2;
  std::vector<double> ladder = {1e-1, 1e-2, 1e-3, 1e-4};
  double delta0 = 0.05;
  int sobolev_k = 1;
  int bidisk_divisor = 8;
  std::string bell_quad = "16x32";
  int bell_points = 10;
  std::vector<std::pair<cplx, cplx>> ibp_points = {{0.5, cplx(0, 0.3)}, {0.7, -0.2}};
  std::vector<double> tent_radii = {1, 0.5, 0.1, 0.01, 0.001};
  bool tent_rows = false;
  int opnorm_random = 20;
  std::string out;

  std::uint64_t require_seed() const {
    if (!seed) throw ConfigError("seed required");
    return *seed;
  }

  json to_json() const {
    json j;
    j["schema_version"] = schema_version;
    j["command"] = command;
    if (seed) j["seed"] = *seed;
    j["p"] = p;
    j["weight"] = weight;
    json w = json::array();
    for (auto z : w2) w.push_back(fmt_complex(z));
    j["w2"] = w;
    j["rmin"] = rmin;
    j["quad"] = quad;
    j["quad_fine"] = quad_fine;
    j["mc"] = mc;
    j["grid_levels"] = grid_levels;
    j["ladder"] = ladder;
    j["delta0"] = delta0;
    j["sobolev_k"] = sobolev_k;
    j["bidisk_divisor"] = bidisk_divisor;
    j["bell_quad"] = bell_quad;
    j["bell_points"] = bell_points;
    json ip = json::array();
    for (auto& [a, b] : ibp_points) ip.push_back({fmt_complex(a), fmt_complex(b)});
    j["ibp_points"] = ip;
    j["tent_radii"] = tent_radii;
    j["tent_rows"] = tent_rows;
    j["opnorm_random"] = opnorm_random;
    return j;
  }

  // FNV-1a over the canonical dump; the output path is not part of the experiment
  std::string hash() const {
    std::string s = to_json().dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    char b[17];
    std::snprintf(b, sizeof b, "%016llx", static_cast<unsigned long long>(h));
    return b;
  }

  std::string seed_str() const { return seed ? std::to_string(*seed) : "none"; }

  void validate() const {
    try {
      build_polar_rule(quad);
      build_polar_rule(quad_fine);
      build_polar_rule(bell_quad);
    } catch (const InvalidRuleError& e) {
      throw ConfigError(e.what());
    }
    if (bidisk_divisor < 1) throw ConfigError("bidisk_divisor must be >= 1");
    if (mc < 1000) throw ConfigError("mc must be >= 1000");
    if (!(rmin > 0 && rmin < 1)) throw ConfigError("rmin must lie in (0, 1)");
    if (grid_levels < 1) throw ConfigError("grid_levels must be >= 1");
    if (ladder.size() < 2) throw ConfigError("ladder needs at least two radii");
    if (sobolev_k < 1 || sobolev_k > 2) throw ConfigError("sobolev_k must be 1 or 2");
    for (double x : p)
      if (!(x > 1)) throw ConfigError("p values must exceed 1");
    for (auto z : w2)
      if (!(std::abs(z) < 1)) throw ConfigError("w2 values must lie in the unit disk");
    if (!weight.empty()) {
      try {
        parse_weight(weight);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
  }
};

inline std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> v;
  for (auto& t : split(s, ',')) {
    try {
      std::size_t used;
      double x = std::stod(t, &used);
      if (used != t.size()) throw std::invalid_argument("");
      v.push_back(x);
    } catch (...) {
      throw ConfigError("bad number '" + t + "' in list '" + s + "'");
    }
  }
  return v;
}

inline std::vector<cplx> parse_complex_list(const std::string& s) {
  std::vector<cplx> v;
  for (auto& t : split(s, ',')) v.push_back(parse_complex(t));
  return v;
}

inline cplx json_complex(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_complex(j.get<std::string>());
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  throw ConfigError("bad complex value " + j.dump());
}

inline void apply_json(Config& c, const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  if (!j.contains("schema_version") || j["schema_version"] != schema_version)
    throw ConfigError("config schema_version must be " + std::to_string(schema_version));
  try {
    for (auto& [k, v] : j.items()) {
      if (k == "schema_version" || k == "command") continue;
      if (k == "seed") c.seed = v.get<std::uint64_t>();
      else if (k == "p") c.p = v.get<std::vector<double>>();
      else if (k == "weight") c.weight = v.get<std::string>();
      else if (k == "w2") {
        c.w2.clear();
        for (auto& z : v) c.w2.push_back(json_complex(z));
      } else if (k == "rmin") c.rmin = v.get<double>();
      else if (k == "quad") c.quad = v.get<std::string>();
      else if (k == "quad_fine") c.quad_fine = v.get<std::string>();
      else if (k == "mc") c.mc = v.get<std::size_t>();
      else if (k == "grid_levels") c.grid_levels = v.get<int>();
      else if (k == "ladder") c.ladder = v.get<std::vector<double>>();
      else if (k == "delta0") c.delta0 = v.get<double>();
      else if (k == "sobolev_k") c.sobolev_k = v.get<int>();
      else if (k == "bidisk_divisor") c.bidisk_divisor = v.get<int>();
      else if (k == "bell_quad") c.bell_quad = v.get<std::string>();
      else if (k == "bell_points") c.bell_points = v.get<int>();
      else if (k == "ibp_points") {
        c.ibp_points.clear();
        for (auto& pr : v) {
          if (!pr.is_array() || pr.size() != 2) throw ConfigError("ibp_points entries are [w1, w2] pairs");
          c.ibp_points.push_back({json_complex(pr[0]), json_complex(pr[1])});
        }
      } else if (k == "tent_radii") c.tent_radii = v.get<std::vector<double>>();
      else if (k == "tent_rows") c.tent_rows = v.get<bool>();
      else if (k == "opnorm_random") c.opnorm_random = v.get<int>();
      else if (k == "out") c.out = v.get<std::string>();
      else throw ConfigError("unknown config key '" + k + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
}

inline Config load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  Config c;
  apply_json(c, j);
  return c;
}

// defaults with seed 42, or the file's values (no default seed) when a file is given
inline Config default_config(const std::string& command) {
  Config c;
  c.command = command;
  c.seed = 42;
  return c;
}

// ---- tables ----

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> r) {
    if (r.size() != header.size()) throw std::logic_error("Table: row width mismatch");
    rows.push_back(std::move(r));
  }
  std::string csv() const {
    std::ostringstream o;
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t k = 0; k < r.size(); ++k) {
        if (k) o << ',';
        bool q = r[k].find_first_of(",\"\n") != std::string::npos;
        if (q) {
          o << '"';
          for (char c : r[k]) o << (c == '"' ? "\"\"" : std::string(1, c));
          o << '"';
        } else {
          o << r[k];
        }
      }
      o << '\n';
    };
    line(header);
    for (auto& r : rows) line(r);
    return o.str();
  }
  std::size_t col(const std::string& name) const {
    for (std::size_t k = 0; k < header.size(); ++k)
      if (header[k] == name) return k;
    throw std::out_of_range("Table: no column " + name);
  }
};

inline Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    std::vector<std::string> r;
    std::string cur;
    bool q = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
      char c = line[k];
      if (q) {
        if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
          cur += '"';
          ++k;
        } else if (c == '"') {
          q = false;
        } else {
          cur += c;
        }
      } else if (c == '"') {
        q = true;
      } else if (c == ',') {
        r.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    r.push_back(cur);
    if (first) {
      t.header = r;
      first = false;
    } else {
      t.rows.push_back(r);
    }
  }
  return t;
}

struct ReportEntry {
  std::string suite, name;
  bool pass = false;
  double value = 0, tolerance = 0;
  std::string note;
};

inline json report_json(const std::vector<ReportEntry>& es) {
  json a = json::array();
  for (auto& e : es) {
    json j{{"suite", e.suite}, {"case", e.name}, {"status", e.pass ? "pass" : "fail"}, {"tolerance", e.tolerance}};
    if (std::isfinite(e.value)) j["value"] = e.value;
    else j["value"] = fmt(e.value);
    if (!e.note.empty()) j["note"] = e.note;
    a.push_back(j);
  }
  return a;
}

struct Outcome {
  int code = 0;
  std::string text;  // CSV or JSON
  std::vector<ReportEntry> checks;
  std::vector<std::pair<std::string, std::string>> extra;  // (suffix, text) side outputs

  std::string first_failure() const {
    for (auto& c : checks)
      if (!c.pass) return c.suite + "/" + c.name;
    return "";
  }
  void finish() {
    code = first_failure().empty() ? 0 : 1;
  }
};

inline void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream o(path, std::ios::binary);
  if (!o) throw std::runtime_error("cannot write '" + path + "'");
  o << text;
}

// ---- shared pieces ----

inline std::vector<cplx> default_w2_grid() { return {0.0, 0.5, 0.9, 0.99, cplx(0, 0.5), cplx(0, 0.9), cplx(0, 0.99)}; }

inline WeightSpec weight_or(const Config& c, const std::string& dflt) {
  try {
    return parse_weight(c.weight.empty() ? dflt : c.weight);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

inline WeightSpec at_center(WeightSpec w, cplx w2) {
  if (w.family == WeightFamily::pair_power) w.w2 = w2;
  return w;
}

// indicator of the tent integrated on a midpoint box grid over its bounding box
inline double indicator_area(const TentSpec& t, int n = 2048) {
  cplx c = t.whole() ? cplx(0) : t.apex();
  double R = t.whole() ? 1.0 : t.radius();
  double x0 = std::max(-1.0, c.real() - R), x1 = std::min(1.0, c.real() + R);
  double y0 = std::max(-1.0, c.imag() - R), y1 = std::min(1.0, c.imag() + R);
  double hx = (x1 - x0) / n, hy = (y1 - y0) / n;
  std::vector<long> counts = parallel_map(std::size_t(n), [&](std::size_t i) {
    long k = 0;
    double x = x0 + (i + 0.5) * hx;
    for (int j = 0; j < n; ++j) {
      cplx w(x, y0 + (j + 0.5) * hy);
      if (in_disk(w) && tent_contains(t, w)) ++k;
    }
    return k;
  });
  long tot = 0;
  for (long k : counts) tot += k;
  return tot * hx * hy;
}

inline TentSpec tent_of_radius(double R, double angle = 0) {
  if (R >= 1) return {0.0};
  return {std::polar(1 - R, angle)};
}

// ---- tent-area ----

inline Outcome cmd_tent_area(const Config& c) {
  Outcome out;
  Table t;
  t.header = {"R", "center_re", "center_im", "lens_area", "area_over_R2", "indicator_area", "rel_diff", "in_envelope",
              "config_hash", "seed", "rule"};
  double lo = 2 * pi / 3 - std::sqrt(3.0) / 2;
  int n = 2048;
  double worst = 0;
  bool env = true;
  double last_ratio = 0;
  for (double R : c.tent_radii) {
    if (!(R > 0 && R <= 1)) throw ConfigError("tent radii must lie in (0, 1]");
    TentSpec ts = tent_of_radius(R);
    double a = tent_area(ts), ind = indicator_area(ts, n);
    double rel = std::abs(ind - a) / a, ratio = a / (R * R);
    bool in = ratio >= lo * (1 - 1e-12) && ratio <= pi * (1 + 1e-12);
    env = env && in;
    worst = std::max(worst, rel);
    last_ratio = ratio;
    cplx z = ts.whole() ? cplx(0) : ts.z;
    t.add({fmt(R), fmt(z.real()), fmt(z.imag()), fmt(a), fmt(ratio), fmt(ind), fmt(rel), in ? "true" : "false",
           c.hash(), c.seed_str(), "box" + std::to_string(n) + "x" + std::to_string(n)});
  }
  out.checks.push_back({"tent-area", "envelope", env, lo, pi});
  out.checks.push_back({"tent-area", "indicator_vs_lens", worst < 0.01, worst, 0.01});
  if (!c.tent_radii.empty() && c.tent_radii.back() <= 1e-3)
    out.checks.push_back(
        {"tent-area", "small_R_limit", std::abs(last_ratio / (pi / 2) - 1) < 0.02, last_ratio, 0.02});
  out.text = t.csv();
  out.finish();
  return out;
}

// ---- bb-sweep ----

struct BbCell {
  double p;
  cplx w2;
  WeightSpec weight;
};

inline Outcome cmd_bb_sweep(const Config& c) {
  Outcome out;
  WeightSpec base = weight_or(c, "pair_power:2");
  if (base.family != WeightFamily::pair_power && base.family != WeightFamily::constant)
    throw ConfigError("bb-sweep needs a disk weight");
  std::vector<double> ps = c.p.empty() ? std::vector<double>{3} : c.p;
  std::vector<cplx> ws = c.w2.empty() ? default_w2_grid() : c.w2;
  Table t;
  t.header = {"p",          "weight",        "w2_re",         "w2_im",       "r_min",      "level",
              "n_tents",    "bp",            "bp_coarse",     "refine_change", "argmax_re", "argmax_im",
              "argmax_R",   "argmax_regime", "argmax_bound",  "max_quotient_over_bound",     "far_max",
              "far_bound",  "growth",        "exact_infinite", "verdict",    "config_hash", "seed",
              "rule"};
  Table tents;
  tents.header = {"p", "w2_re", "w2_im", "z_re", "z_im", "R", "regime", "avg_sigma", "avg_dual", "quotient", "bound",
                  "config_hash", "seed"};
  std::string rule = "ray-gl" + std::to_string(AngularOptions{}.n_gl) + "-adaptive";
  bool all_ok = true;
  for (double p : ps)
    for (cplx w2 : ws) {
      WeightSpec sp = at_center(base, w2);
      auto est = bp_refine(sp, p, w2, c.rmin, c.grid_levels);
      double v = est.value, coarse = est.history.size() > 1 ? est.history[est.history.size() - 2] : v;
      double change = std::isfinite(v) && std::isfinite(coarse) && v > 0 ? std::abs(v - coarse) / v : inf;
      bool proved = proved_family(sp);
      double worst = 0, far_max = 0, far_bound = proved ? regime_bound(sp, p, Regime::far, c.delta0) : inf;
      for (auto& r : est.rows) {
        if (r.empty) continue;
        Regime g = regime_classify(r.tent, w2, c.delta0);
        double b = proved ? regime_bound(sp, p, g, c.delta0) : inf;
        if (proved && std::isfinite(b)) worst = std::max(worst, r.quotient / b);
        if (g == Regime::far) far_max = std::max(far_max, r.quotient);
        if (c.tent_rows) {
          cplx z = r.tent.whole() ? cplx(0) : r.tent.z;
          tents.add({fmt(p), fmt(w2.real()), fmt(w2.imag()), fmt(z.real()), fmt(z.imag()), fmt(r.tent.radius()),
                     to_string(g), fmt(r.avg_sigma), fmt(r.avg_dual), fmt(r.quotient), fmt(b), c.hash(),
                     c.seed_str()});
        }
      }
      auto sh = sharpness_ladder(sp, p, w2, c.ladder);
      bool diverging = sh.diverging || !std::isfinite(v);
      Regime ag = regime_classify(est.argmax, w2, c.delta0);
      cplx az = est.argmax.whole() ? cplx(0) : est.argmax.z;
      t.add({fmt(p), sp.str(), fmt(w2.real()), fmt(w2.imag()), fmt(c.rmin), std::to_string(est.level),
             std::to_string(est.rows.size()), fmt(v), fmt(coarse), fmt(change), fmt(az.real()), fmt(az.imag()),
             fmt(est.argmax.radius()), to_string(ag), fmt(proved ? regime_bound(sp, p, ag, c.delta0) : inf),
             proved ? fmt(worst) : "", fmt(far_max), fmt(far_bound), fmt(sh.growth), sh.exact_infinite ? "true" : "false",
             diverging ? "diverging" : "bounded", c.hash(), c.seed_str(), rule});
      if (proved && worst > 1.05) all_ok = false;
    }
  out.checks.push_back({"bb-sweep", "regime_bounds", all_ok, 0, 1.05});
  out.text = t.csv();
  if (c.tent_rows) out.extra.push_back({".tents.csv", tents.csv()});
  out.finish();
  return out;
}

// ---- bell-check ----

struct BellCase {
  std::string id;
  symbolic::MixedPoly poly;
  bool holomorphic;
  std::optional<cplx> constant;  // known projection when it is a constant
};

inline std::vector<BellCase> bell_cases() {
  using symbolic::MixedPoly;
  MixedPoly z1 = MixedPoly::variable(0), cz1 = MixedPoly::variable(1), z2 = MixedPoly::variable(2);
  return {{"1", MixedPoly(1), true, {}},
          {"z1", z1, true, {}},
          {"z2", z2, true, {}},
          {"z1*z2", z1 * z2, true, {}},
          {"z1^2", z1 * z1, true, {}},
          {"z1^3-2*z1*z2+z2", z1.pow(3) - MixedPoly(2) * z1 * z2 + z2, true, {}},
          {"conj(z1)", cz1, false, cplx(0)},
          {"|z1|^2", z1 * cz1, false, cplx(2.0 / 3.0)}};
}

inline std::vector<GPoint> random_g_points(std::size_t n, std::uint64_t seed, double rmax = 0.6) {
  McSampler rng(seed);
  std::vector<GPoint> z;
  for (std::size_t k = 0; k < n; ++k) z.push_back(phi({rmax * rng.disk_point(), rmax * rng.disk_point()}));
  return z;
}

inline Outcome cmd_bell_check(const Config& c) {
  std::uint64_t seed = c.require_seed();
  Outcome out;
  auto q = build_polar_rule(c.bell_quad);
  GProjectionOptions go;
  go.n_radial = q.n_radial;
  go.n_angular = q.n_angular;
  auto pts = sample_bidisk(c.mc, seed);
  auto zs = random_g_points(c.bell_points, seed + 1);
  Table t;
  t.header = {"h", "point", "z1_re", "z1_im", "z2_re", "z2_im", "projected_re", "projected_im", "mc_re", "mc_im",
              "mc_se", "discrepancy_se", "exact_rel_err", "config_hash", "seed", "rule"};
  std::string rule = c.bell_quad + "/mc" + std::to_string(c.mc);
  double worst_se = 0, worst_exact = 0;
  for (auto& bc : bell_cases()) {
    ZPoly f(bc.poly);
    auto h = [&](GPoint z) { return eval_z(f, z); };
    auto g = project_G(h, go);
    auto mcs = parallel_map(zs.size(), [&](std::size_t k) { return mc_g_projection(pts, h, zs[k]); });
    double case_se = 0;
    for (std::size_t k = 0; k < zs.size(); ++k) {
      cplx pv = g(zs[k]);
      auto& m = mcs[k];
      double dse = std::abs(pv - m.estimate) / m.se();
      double ex = 0;
      if (bc.holomorphic) {
        cplx hv = h(zs[k]);
        ex = std::abs(pv - hv) / std::max(1.0, std::abs(hv));
      } else if (bc.constant) {
        ex = std::abs(pv - *bc.constant) / std::max(1.0, std::abs(*bc.constant));
      }
      case_se = std::max(case_se, dse);
      worst_exact = std::max(worst_exact, ex);
      t.add({bc.id, std::to_string(k), fmt(zs[k].z1.real()), fmt(zs[k].z1.imag()), fmt(zs[k].z2.real()),
             fmt(zs[k].z2.imag()), fmt(pv.real()), fmt(pv.imag()), fmt(m.estimate.real()), fmt(m.estimate.imag()),
             fmt(m.se()), fmt(dse), fmt(ex), c.hash(), std::to_string(seed), rule});
    }
    worst_se = std::max(worst_se, case_se);
    if (!bc.holomorphic) out.checks.push_back({"bell-check", bc.id + "_within_3se", case_se <= 3, case_se, 3});
  }
  out.checks.push_back({"bell-check", "exact_projection", worst_exact < 1e-6, worst_exact, 1e-6});
  auto origin = monte_carlo(McRegion::G, c.mc, seed + 2, [](GPoint) { return 1.0; });
  double g00 = g_kernel({0, 0}, {0, 0}).real();
  // reproducing h = 1 at the origin under the covering measure, which is twice Lebesgue measure on G
  double dse = std::abs(2 * g00 * origin.estimate - 1) / (2 * g00 * origin.std_error);
  out.checks.push_back({"bell-check", "origin_prefactor", dse <= 3, g00 * pi * pi, 3});
  t.add({"g(0,0)*pi^2", "origin", "0", "0", "0", "0", fmt(g00 * pi * pi), "0", fmt(2 * g00 * origin.estimate), "0",
         fmt(2 * g00 * origin.std_error), fmt(dse), fmt(std::abs(g00 * pi * pi - 1)), c.hash(), std::to_string(seed),
         rule});
  out.text = t.csv();
  out.finish();
  return out;
}

// ---- ibp-check ----

struct IbpTerm {
  symbolic::GaussRational c;
  int a1, b1, a2, b2;  // eta1^a1 conj(eta1)^b1 eta2^a2 conj(eta2)^b2
};

struct IbpFunction {
  std::string id;
  std::vector<IbpTerm> terms;
};

inline std::vector<IbpFunction> ibp_functions() {
  return {{"conj(eta1)^2", {{1, 0, 2, 0, 0}}},
          {"conj(eta1)*conj(eta2)*eta1", {{1, 1, 1, 0, 1}}},
          {"eta1*eta2+conj(eta2)", {{1, 1, 0, 1, 0}, {1, 0, 0, 0, 1}}}};
}

inline std::vector<std::array<int, 2>> ibp_betas() { return {{0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 0}, {0, 2}, {2, 2}}; }

inline Outcome cmd_ibp_check(const Config& c) {
  Outcome out;
  QuadratureRule q;
  try {
    q = build_polar_rule(c.quad);
  } catch (const InvalidRuleError& e) {
    throw ConfigError(e.what());
  }
  for (auto& [w1, w2] : c.ibp_points)
    for (cplx w : {w1, w2})
      if (std::abs(w) < 0.1 || std::abs(w) > 0.8)
        throw ConfigError("ibp-check: evaluation points need 0.1 <= |w| <= 0.8, got " + fmt_complex(w));
  // one-variable integrals: lhs uses d^b/dw^b of the kernel, rhs uses K_b and T^b
  auto lhs1 = [&](int b, cplx w, int a, int bb) {
    return integrate(q, [&](cplx e) { return kernel_w_derivative(b, w, e) * ipow(e, a) * ipow(std::conj(e), bb) / pi; });
  };
  auto rhs1 = [&](int b, cplx w, int a, int bb) {
    auto tg = symbolic::tangential_apply(symbolic::EtaPoly::monomial({a, bb, 0}), b);
    NumPoly<3> tn(tg);
    return integrate(q, [&](cplx e) { return partial_kernel(b, w, e) * tn.eval({e, std::conj(e), w}) / pi; }) /
           ipow(w, b);
  };
  Table t;
  t.header = {"f", "beta1", "beta2", "w1_re", "w1_im", "w2_re", "w2_im", "lhs_re", "lhs_im", "rhs_re", "rhs_im",
              "residual", "asserted", "config_hash", "seed", "rule"};
  double worst00 = 0;
  for (auto& f : ibp_functions())
    for (auto [b1, b2] : ibp_betas())
      for (auto& [w1, w2] : c.ibp_points) {
        cplx L = 0, R = 0;
        for (auto& tm : f.terms) {
          cplx cc = tm.c.to_complex();
          L += cc * lhs1(b1, w1, tm.a1, tm.b1) * lhs1(b2, w2, tm.a2, tm.b2);
          R += cc * rhs1(b1, w1, tm.a1, tm.b1) * rhs1(b2, w2, tm.a2, tm.b2);
        }
        double m = std::max(std::abs(L), std::abs(R));
        double res = m < 1e-14 ? std::abs(L - R) : std::abs(L - R) / m;
        bool asserted = b1 == 0 && b2 == 0;
        if (asserted) worst00 = std::max(worst00, res);
        t.add({f.id, std::to_string(b1), std::to_string(b2), fmt(w1.real()), fmt(w1.imag()), fmt(w2.real()),
               fmt(w2.imag()), fmt(L.real()), fmt(L.imag()), fmt(R.real()), fmt(R.imag()), fmt(res),
               asserted ? "true" : "false", c.hash(), c.seed_str(), q.sizes()});
      }
  out.checks.push_back({"ibp-check", "beta_00_residual", worst00 < 1e-6, worst00, 1e-6});
  out.text = t.csv();
  out.finish();
  return out;
}

// ---- sobolev-check ----

struct SobolevCase {
  std::string id;
  symbolic::MixedPoly poly;
  bool asserted;
};

inline std::vector<SobolevCase> sobolev_cases() {
  using symbolic::MixedPoly;
  MixedPoly z1 = MixedPoly::variable(0), cz1 = MixedPoly::variable(1), z2 = MixedPoly::variable(2),
            cz2 = MixedPoly::variable(3);
  return {{"conj(z1)", cz1, true},
          {"conj(z2)", cz2, true},
          {"|z1|^2", z1 * cz1, true},
          {"z2*conj(z1)", z2 * cz1, true},
          {"z1", z1, false}};
}

struct SobolevRatio {
  double num = 0, den = 0, ratio = 0;
};

inline SobolevRatio sobolev_ratio(const ZPoly& f, int k, double p, const QuadratureRule& qa, const QuadratureRule& qb) {
  double l = 1.5 * k * p;
  auto g = project_G([&](GPoint z) { return eval_z(f, z); });
  SobolevRatio r;
  r.num = weighted_sobolev_norm(projection_derivatives(g, k), k, p, l, qa, qb);
  r.den = weighted_sobolev_norm(zpoly_derivatives(f, k), k, p, 0, qa, qb);
  r.ratio = r.num / r.den;
  return r;
}

// outer bidisk rule: the disk rule at 1/divisor size, second factor rotated by half a step
inline std::pair<QuadratureRule, QuadratureRule> bidisk_rules(const std::string& quad, int div) {
  auto q = build_polar_rule(quad);
  try {
    return {build_polar_rule(q.n_radial / div, q.n_angular / div),
            build_polar_rule(q.n_radial / div, q.n_angular / div, 0.5)};
  } catch (const InvalidRuleError& e) {
    throw ConfigError(e.what());
  }
}

inline Outcome cmd_sobolev_check(const Config& c) {
  Outcome out;
  double p = c.p.empty() ? 3.0 : c.p.front();
  int k = c.sobolev_k;
  auto [ca, cb] = bidisk_rules(c.quad, c.bidisk_divisor);
  auto [fa, fb] = bidisk_rules(c.quad_fine, c.bidisk_divisor);
  Table t;
  t.header = {"f", "k", "p", "l", "num_coarse", "den_coarse", "ratio_coarse", "num_fine", "den_fine", "ratio_fine",
              "drift", "asserted", "config_hash", "seed", "rule"};
  bool ok = true;
  double worst = 0;
  for (auto& sc : sobolev_cases()) {
    ZPoly f(sc.poly);
    auto a = sobolev_ratio(f, k, p, ca, cb), b = sobolev_ratio(f, k, p, fa, fb);
    double m = std::max(std::abs(a.ratio), std::abs(b.ratio));
    double drift = m < 1e-9 ? 0 : std::abs(a.ratio - b.ratio) / m;
    bool finite = std::isfinite(a.ratio) && std::isfinite(b.ratio);
    if (sc.asserted) {
      worst = std::max(worst, finite ? drift : inf);
      ok = ok && finite && drift < 0.1;
    }
    t.add({sc.id, std::to_string(k), fmt(p), fmt(1.5 * k * p), fmt(a.num), fmt(a.den), fmt(a.ratio), fmt(b.num),
           fmt(b.den), fmt(b.ratio), fmt(drift), sc.asserted ? "true" : "false", c.hash(), c.seed_str(),
           c.quad + "," + c.quad_fine + "/div" + std::to_string(c.bidisk_divisor)});
  }
  out.checks.push_back({"sobolev-check", "finite_and_stable", ok, worst, 0.1});
  out.text = t.csv();
  out.finish();
  return out;
}

// ---- opnorm-sweep ----

struct OpCell {
  bool positive;
  double p;
  WeightSpec weight;
  cplx w2;
  std::string group;
};

inline Outcome cmd_opnorm_sweep(const Config& c) {
  std::uint64_t seed = c.require_seed();
  Outcome out;
  QuadratureRule q;
  try {
    q = build_polar_rule(c.quad);
  } catch (const InvalidRuleError& e) {
    throw ConfigError(e.what());
  }
  WeightSpec base = weight_or(c, "pair_power:2");
  if (!base.on_disk()) throw ConfigError("opnorm-sweep needs a disk weight");
  std::vector<double> ps = c.p.empty() ? std::vector<double>{3} : c.p;
  std::vector<cplx> ws = c.w2.empty() ? std::vector<cplx>{0.0, 0.5, 0.9, cplx(0, 0.5), cplx(0, 0.9)} : c.w2;
  std::vector<OpCell> cells;
  cells.push_back({false, 2, WeightSpec::constant(1), 0.0, "baseline"});
  for (double p : ps)
    for (cplx w : ws)
      for (bool pos : {false, true}) cells.push_back({pos, p, at_center(base, w), w, "main"});
  for (cplx w : ws)
    for (double p : {1.5, 2.0, 3.0, 3.9}) cells.push_back({false, p, WeightSpec::pair_power(2, w, -1), w, "2-p"});
  auto fam = test_family(seed, c.opnorm_random);
  Table t;
  t.header = {"operator", "p", "weight", "w2_re", "w2_im", "group", "family_size", "skipped", "estimate", "argmax",
              "config_hash", "seed", "rule"};
  bool ok = true;
  for (auto& cell : cells) {
    auto e = opnorm_lower_bound(cell.positive, cell.p, cell.weight, fam, q);
    ok = ok && std::isfinite(e.value) && e.value > 0;
    t.add({cell.positive ? "B+" : "B", fmt(cell.p), e.weight, fmt(cell.w2.real()), fmt(cell.w2.imag()), cell.group,
           std::to_string(fam.size()), std::to_string(e.skipped), fmt(e.value), e.argmax_id, c.hash(),
           std::to_string(seed), q.sizes()});
  }
  out.checks.push_back({"opnorm-sweep", "finite_estimates", ok, 0, 0});
  double base_v = std::stod(t.rows[0][t.col("estimate")]);
  out.checks.push_back({"opnorm-sweep", "unweighted_L2_is_1", std::abs(base_v - 1) < 1e-6, base_v, 1e-6});
  out.text = t.csv();
  out.finish();
  return out;
}

}  // namespace bergman::harness
