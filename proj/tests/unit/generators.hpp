#pragma once

#include <random>
#include <vector>

#include "focklab/numeric.hpp"
#include "focklab/symbols.hpp"

namespace gen {

using focklab::Complex;

// Seeded source for property tests; each test owns one so failures replay.
class Source {
 public:
  explicit Source(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>()(rng_); }

  Complex point_in_box(double half) {
    const double x = uniform(-half, half);
    return {x, uniform(-half, half)};
  }
  Complex point_in_disk(double radius) {
    const double rho = radius * std::sqrt(uniform(0.0, 1.0));
    return std::polar(rho, uniform(0.0, 2.0 * focklab::kPi));
  }
  Complex gaussian_complex() {
    const double a = normal();
    return {a, normal()};
  }
  std::vector<Complex> coefficients(int degree) {
    std::vector<Complex> c;
    for (int k = 0; k <= degree; ++k) c.push_back(gaussian_complex());
    return c;
  }
  focklab::Symbol holomorphic_polynomial(int degree) {
    focklab::SymbolParams p;
    p.coeffs = coefficients(degree);
    return focklab::make_symbol("holo-poly", p);
  }

 private:
  std::mt19937_64 rng_;
};

inline focklab::Symbol from_lambda(std::string name, focklab::ScalarField f) {
  focklab::Symbol s;
  s.name = std::move(name);
  s.f = std::move(f);
  s.smoothness = focklab::Smoothness::measurable;
  return s;
}

}  // namespace gen
