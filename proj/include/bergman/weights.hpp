#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "domain.hpp"
#include "quadrature.hpp"

namespace bergman {

enum class WeightFamily { constant, pair_power, pullback_delta, sobolev_target };

struct WeightSpec {
  WeightFamily family = WeightFamily::constant;
  double c = 1;
  // pair_power exponent is s + s_per_p * p, so "2-p" is s = 2, s_per_p = -1
  double s = 0, s_per_p = 0;
  cplx w2 = 0;
  double l = 0;
  int k = 0;
  double p = 0;

  static WeightSpec constant(double c) { return {WeightFamily::constant, c}; }
  static WeightSpec pair_power(double s, cplx w2, double s_per_p = 0) {
    WeightSpec w;
    w.family = WeightFamily::pair_power;
    w.s = s;
    w.s_per_p = s_per_p;
    w.w2 = w2;
    return w;
  }
  static WeightSpec pullback_delta(double l) {
    WeightSpec w;
    w.family = WeightFamily::pullback_delta;
    w.l = l;
    return w;
  }
  static WeightSpec sobolev_target(int k, double p) {
    WeightSpec w;
    w.family = WeightFamily::sobolev_target;
    w.k = k;
    w.p = p;
    return w;
  }

  bool on_disk() const { return family == WeightFamily::constant || family == WeightFamily::pair_power; }
  bool p_dependent() const { return family == WeightFamily::pair_power && s_per_p != 0; }
  double exponent(double pp) const { return s + s_per_p * pp; }
  // fixes a p-dependent exponent
  WeightSpec at_p(double pp) const {
    WeightSpec w = *this;
    if (p_dependent()) {
      w.s = exponent(pp);
      w.s_per_p = 0;
    }
    return w;
  }
  // exponent of |w1 - w2| for the bidisk families
  double bidisk_exponent() const { return family == WeightFamily::pullback_delta ? 2 * l : 3.0 * k * p; }

  std::string str() const {
    std::ostringstream o;
    o.precision(17);
    switch (family) {
      case WeightFamily::constant: o << "constant:" << c; break;
      case WeightFamily::pair_power:
        o << "pair_power:";
        if (p_dependent())
          o << s << (s_per_p < 0 ? "-" : "+") << (std::abs(s_per_p) == 1 ? "" : std::to_string(std::abs(s_per_p))) << "p";
        else
          o << s;
        o << ":" << w2.real() << ":" << w2.imag();
        break;
      case WeightFamily::pullback_delta: o << "pullback_delta:" << l; break;
      case WeightFamily::sobolev_target: o << "sobolev_target:" << k << ":" << p; break;
    }
    return o.str();
  }
};

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

// accepts "2", "2-p", "-1+0.5p"
inline void parse_exponent(const std::string& t, double& s, double& s_per_p) {
  s_per_p = 0;
  auto pp = t.find('p');
  if (pp == std::string::npos) {
    std::size_t used;
    s = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument("bad exponent '" + t + "'");
    return;
  }
  if (pp != t.size() - 1) throw std::invalid_argument("bad exponent '" + t + "'");
  std::size_t op = t.find_last_of("+-", pp);
  if (op == std::string::npos || op == 0) throw std::invalid_argument("bad exponent '" + t + "'");
  s = std::stod(t.substr(0, op));
  std::string coef = t.substr(op + 1, pp - op - 1);
  double c = coef.empty() ? 1.0 : std::stod(coef);
  s_per_p = t[op] == '-' ? -c : c;
}

inline WeightSpec parse_weight(const std::string& spec) {
  auto f = split(spec, ':');
  try {
    if (f.size() == 2 && f[0] == "constant") {
      double c = std::stod(f[1]);
      if (!(c > 0)) throw std::invalid_argument("constant weight needs c > 0");
      return WeightSpec::constant(c);
    }
    if ((f.size() == 2 || f.size() == 4) && f[0] == "pair_power") {
      double s, sp;
      parse_exponent(f[1], s, sp);
      cplx w2 = f.size() == 4 ? cplx(std::stod(f[2]), std::stod(f[3])) : cplx(0);
      return WeightSpec::pair_power(s, w2, sp);
    }
    if (f.size() == 2 && f[0] == "pullback_delta") return WeightSpec::pullback_delta(std::stod(f[1]));
    if (f.size() == 3 && f[0] == "sobolev_target") return WeightSpec::sobolev_target(std::stoi(f[1]), std::stod(f[2]));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument("invalid weight '" + spec + "': " + e.what());
  }
  throw std::invalid_argument("invalid weight '" + spec + "'");
}

inline double eval(cplx w, const WeightSpec& sp) {
  switch (sp.family) {
    case WeightFamily::constant: return sp.c;
    case WeightFamily::pair_power: {
      if (sp.p_dependent()) throw std::invalid_argument("eval: p-dependent weight needs at_p");
      double d = std::abs(w - sp.w2);
      if (d == 0) return sp.s < 0 ? inf : (sp.s == 0 ? 1.0 : 0.0);
      return std::pow(d, sp.s);
    }
    default: throw std::invalid_argument("eval: bidisk weight evaluated at a disk point");
  }
}

inline double eval(BidiskPoint b, const WeightSpec& sp) {
  if (sp.on_disk()) throw std::invalid_argument("eval: disk weight evaluated at a bidisk point");
  double d = std::abs(jacobian(b)), e = sp.bidisk_exponent();
  if (d == 0) return e < 0 ? inf : (e == 0 ? 1.0 : 0.0);
  return std::pow(d, e);
}

inline WeightSpec dual_weight(const WeightSpec& sp, double p) {
  if (!(p > 1)) throw std::invalid_argument("dual_weight: need p > 1");
  if (sp.family == WeightFamily::constant) return WeightSpec::constant(std::pow(sp.c, -1 / (p - 1)));
  if (sp.family == WeightFamily::pair_power) {
    WeightSpec r = sp.at_p(p);
    r.s = -r.s / (p - 1);
    return r;
  }
  throw std::invalid_argument("dual_weight: only disk families have a dual");
}

}  // namespace bergman
