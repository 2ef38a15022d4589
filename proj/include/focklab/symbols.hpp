#pragma once

#include <functional>
#include <string>
#include <vector>

#include "focklab/numeric.hpp"

namespace focklab {

enum class SupportHint { entire_plane, compact, bounded_oscillation };
enum class Smoothness { measurable, c1, c2 };

const char* to_string(SupportHint s);
const char* to_string(Smoothness s);

// A scalar field f on C with optional closed-form dbar f = (d/dx + i d/dy) f / 2.
struct Symbol {
  std::string name;
  ScalarField f;
  ScalarField dbar;  // empty when no closed form exists
  SupportHint support = SupportHint::entire_plane;
  double support_radius = 0.0;  // meaningful for compact support
  Smoothness smoothness = Smoothness::c2;
  bool holomorphic = false;

  Complex operator()(Complex z) const { return f(z); }
  bool has_dbar() const { return static_cast<bool>(dbar); }
};

struct SymbolParams {
  std::vector<Complex> coeffs;  // holo-poly, lowest degree first
  double beta = 1.0;            // conj-gaussian decay
  double radius = 1.0;          // bump / step radius
  double amplitude = 1.0;       // bump height
};

// Family ids: holo-poly, conj-linear, conj-gaussian, bump, step, mixed, zero.
Symbol make_symbol(const std::string& id, const SymbolParams& params = {});
const std::vector<std::string>& symbol_families();

// c f
Symbol scaled(const Symbol& s, Complex c);
// w -> f(w - a)
Symbol shifted(const Symbol& s, Complex a);
Symbol sum(const Symbol& a, const Symbol& b);

}  // namespace focklab
