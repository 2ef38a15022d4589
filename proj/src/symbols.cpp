#include "focklab/symbols.hpp"

#include <cmath>

#include "focklab/error.hpp"

namespace focklab {

const char* to_string(SupportHint s) {
  switch (s) {
    case SupportHint::entire_plane: return "entire-plane";
    case SupportHint::compact: return "compact";
    case SupportHint::bounded_oscillation: return "bounded-oscillation";
  }
  return "?";
}

const char* to_string(Smoothness s) {
  switch (s) {
    case Smoothness::measurable: return "measurable";
    case Smoothness::c1: return "C1";
    case Smoothness::c2: return "C2";
  }
  return "?";
}

const std::vector<std::string>& symbol_families() {
  static const std::vector<std::string> ids = {"holo-poly", "conj-linear", "conj-gaussian", "bump",
                                               "step",      "mixed",       "zero"};
  return ids;
}

namespace {

Symbol holo_poly(std::vector<Complex> coeffs) {
  Symbol s;
  s.name = "holo-poly";
  s.f = [coeffs](Complex w) {
    Complex acc{};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * w + *it;
    return acc;
  };
  s.dbar = [](Complex) { return Complex{}; };
  s.support = SupportHint::entire_plane;
  s.smoothness = Smoothness::c2;
  s.holomorphic = true;
  return s;
}

Symbol bump(double radius, double amplitude) {
  if (!(radius > 0.0)) throw Error(ErrorCode::invalid_argument, "bump radius must be > 0");
  Symbol s;
  s.name = "bump";
  const double r2 = radius * radius;
  s.f = [r2, amplitude](Complex w) {
    const double u = std::norm(w) / r2;
    if (u >= 1.0) return Complex{};
    return Complex(amplitude * (1.0 - u) * (1.0 - u));
  };
  s.dbar = [r2, amplitude](Complex w) {
    const double u = std::norm(w) / r2;
    if (u >= 1.0) return Complex{};
    return -2.0 * amplitude * (1.0 - u) * w / r2;
  };
  s.support = SupportHint::compact;
  s.support_radius = radius;
  s.smoothness = Smoothness::c1;
  return s;
}

}  // namespace

Symbol make_symbol(const std::string& id, const SymbolParams& p) {
  if (id == "holo-poly") return holo_poly(p.coeffs);
  if (id == "zero") {
    Symbol s = holo_poly({});
    s.name = "zero";
    s.support = SupportHint::compact;
    return s;
  }
  if (id == "conj-linear") {
    Symbol s;
    s.name = id;
    s.f = [](Complex w) { return std::conj(w); };
    s.dbar = [](Complex) { return Complex(1.0); };
    s.support = SupportHint::bounded_oscillation;
    s.smoothness = Smoothness::c2;
    return s;
  }
  if (id == "conj-gaussian") {
    if (!(p.beta > 0.0)) throw Error(ErrorCode::invalid_argument, "conj-gaussian beta must be > 0");
    const double beta = p.beta;
    Symbol s;
    s.name = id;
    s.f = [beta](Complex w) { return std::conj(w) * std::exp(-beta * std::norm(w)); };
    s.dbar = [beta](Complex w) {
      const double t = std::norm(w);
      return Complex(std::exp(-beta * t) * (1.0 - beta * t));
    };
    s.support = SupportHint::entire_plane;
    s.smoothness = Smoothness::c2;
    return s;
  }
  if (id == "bump") return bump(p.radius, p.amplitude);
  if (id == "step") {
    if (!(p.radius > 0.0)) throw Error(ErrorCode::invalid_argument, "step radius must be > 0");
    const double r2 = p.radius * p.radius;
    Symbol s;
    s.name = id;
    s.f = [r2](Complex w) { return std::norm(w) < r2 ? Complex(1.0) : Complex{}; };
    s.support = SupportHint::compact;
    s.support_radius = p.radius;
    s.smoothness = Smoothness::measurable;
    return s;
  }
  if (id == "mixed") {
    Symbol s = sum(make_symbol("conj-linear"), bump(p.radius, p.amplitude));
    s.name = id;
    return s;
  }
  throw Error(ErrorCode::invalid_argument, "unknown symbol family '" + id + "'");
}

Symbol scaled(const Symbol& s, Complex c) {
  Symbol out = s;
  out.name = s.name + "*c";
  out.f = [f = s.f, c](Complex w) { return c * f(w); };
  if (s.dbar) out.dbar = [d = s.dbar, c](Complex w) { return c * d(w); };
  if (c == Complex{}) {
    out.support = SupportHint::compact;
    out.support_radius = 0.0;
  }
  return out;
}

Symbol shifted(const Symbol& s, Complex a) {
  Symbol out = s;
  out.name = s.name + "(.-a)";
  out.f = [f = s.f, a](Complex w) { return f(w - a); };
  if (s.dbar) out.dbar = [d = s.dbar, a](Complex w) { return d(w - a); };
  if (s.support == SupportHint::compact) out.support_radius = s.support_radius + std::abs(a);
  return out;
}

Symbol sum(const Symbol& a, const Symbol& b) {
  Symbol out;
  out.name = a.name + "+" + b.name;
  out.f = [fa = a.f, fb = b.f](Complex w) { return fa(w) + fb(w); };
  if (a.dbar && b.dbar) out.dbar = [da = a.dbar, db = b.dbar](Complex w) { return da(w) + db(w); };
  if (a.support == SupportHint::compact && b.support == SupportHint::compact) {
    out.support = SupportHint::compact;
    out.support_radius = std::max(a.support_radius, b.support_radius);
  } else if (a.support == SupportHint::entire_plane || b.support == SupportHint::entire_plane) {
    out.support = (a.support == SupportHint::bounded_oscillation || b.support == SupportHint::bounded_oscillation)
                      ? SupportHint::bounded_oscillation
                      : SupportHint::entire_plane;
  } else {
    out.support = SupportHint::bounded_oscillation;
  }
  out.smoothness = std::min(a.smoothness, b.smoothness);
  out.holomorphic = a.holomorphic && b.holomorphic;
  return out;
}

}  // namespace focklab
