#pragma once

#include <utility>
#include <vector>

#include "focklab/numeric.hpp"

namespace focklab {

struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule mapped to [a, b].
GaussLegendre gauss_legendre(int n, double a, double b);

// Radius beyond which exp(-scale * rho^2 / 2) < 1e-16.
double gaussian_cutoff_radius(double scale);

// Polar product rule for integrals over C of integrands with Gaussian decay.
// Weights integrate plain dA; the integrand carries its own weight factor.
struct PlaneRule {
  std::vector<Complex> nodes;
  std::vector<double> weights;
  double scale = 1.0;
  double r_cut = 0.0;
  int radial_order = 0;
  int angular_count = 0;
  // Largest a + b such that z^a conj(z)^b exp(-scale |z|^2) integrates to 1e-12.
  int exactness_degree = -1;

  std::size_t size() const { return nodes.size(); }
};

// angular_count = 0 selects 2 * order + 1; r_cut = 0 selects
// gaussian_cutoff_radius(scale).
PlaneRule gaussian_plane_rule(int order, double scale, int angular_count = 0, double r_cut = 0.0);

// Polar Gauss-Legendre x trapezoid rule on the disk B(center, r).
struct BallRule {
  Complex center;
  double radius = 0.0;
  int order = 0;
  std::vector<Complex> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
  // Exact for polynomials in (Re w, Im w) up to this total degree.
  int exactness_degree() const { return 2 * order - 2; }
  BallRule shifted(Complex to) const;
};

BallRule ball_rule(Complex center, double r, int order);

// Deterministic weighted sum of f over the rule's nodes.
template <typename Rule, typename F>
auto integrate(const Rule& rule, F&& f) {
  using T = decltype(f(Complex{}) * 1.0);
  std::vector<T> terms(rule.nodes.size());
  for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = f(rule.nodes[i]) * rule.weights[i];
  return pairwise_sum(std::span<const T>(terms));
}

}  // namespace focklab
