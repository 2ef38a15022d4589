#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "focklab/numeric.hpp"
#include "focklab/quadrature.hpp"
#include "focklab/weight.hpp"

namespace focklab {

// Orthonormal monomials e_k = z^k / c_k, k = 0..D, in L^2(exp(-2 phi) dA).
// Normalizations are kept as logarithms so that high degrees stay finite.
class FockBasis {
 public:
  FockBasis(WeightModel weight, int degree, PlaneRule rule);

  const WeightModel& weight() const { return weight_; }
  int degree() const { return degree_; }
  std::size_t size() const { return static_cast<std::size_t>(degree_) + 1; }
  const PlaneRule& rule() const { return *rule_; }

  double log_norm(int k) const { return log_c_[k]; }
  // c_k^2
  double norm_sq(int k) const;

  Complex value(int k, Complex z) const;
  // e_k(z) exp(-phi(z)) for k = 0..D into out (size D + 1).
  void weighted_values(Complex z, std::span<Complex> out) const;
  std::vector<Complex> weighted_values(Complex z) const;
  // Row i holds weighted_values(nodes[i]).
  Eigen::MatrixXcd weighted_samples(std::span<const Complex> nodes) const;

  // <g, e_k> for k = 0..D, integrating with the basis plane rule.
  Eigen::VectorXcd project(const ScalarField& g) const;
  // Same, with gw(w) = g(w) exp(-phi(w)) supplied directly.
  Eigen::VectorXcd project_weighted(const ScalarField& gw) const;
  // sum_k coeffs_k e_k(z)
  Complex synthesize(const Eigen::VectorXcd& coeffs, Complex z) const;

 private:
  WeightModel weight_;
  int degree_;
  std::shared_ptr<const PlaneRule> rule_;
  std::vector<double> log_c_;
};

// Raises degree_cap when some e_k carries non-negligible mass beyond the
// rule's cutoff radius; the message names the largest supported degree.
FockBasis build_basis(const WeightModel& w, int degree, const PlaneRule& rule);

// Smallest radius R such that every e_k, k <= degree, has relative mass
// below 1e-16 outside B(0, R); never less than the Gaussian cutoff.
double basis_cutoff_radius(const WeightModel& w, int degree);

// Plane rule sized for a basis of the given degree. order = 0 picks a default
// radial order; angular = 0 picks 2 * order + 1.
PlaneRule basis_plane_rule(const WeightModel& w, int degree, int order = 0, int angular = 0);

enum class KernelMode { closed_form_gaussian, basis_sum };

class KernelEval {
 public:
  KernelEval(FockBasis basis, KernelMode mode);

  const FockBasis& basis() const { return basis_; }
  KernelMode mode() const { return mode_; }

  Complex operator()(Complex z, Complex w) const;
  // K(z, w) exp(-phi(z) - phi(w)), evaluated without overflow.
  Complex weighted(Complex z, Complex w) const;

 private:
  FockBasis basis_;
  KernelMode mode_;
};

Complex kernel(const KernelEval& K, Complex z, Complex w);

// w -> K(w, z) / sqrt(K(z, z)).
ScalarField normalized_kernel(const KernelEval& K, Complex z);
// w -> k_z(w) exp(-phi(w)).
ScalarField weighted_normalized_kernel(const KernelEval& K, Complex z);

// (int |f exp(-phi)|^p dA)^(1/p)
double lp_norm(const ScalarField& f, double p, const PlaneRule& rule, const WeightModel& w);
// Same, with fw = f exp(-phi) supplied directly.
double lp_norm_weighted(const ScalarField& fw, double p, const PlaneRule& rule);

Eigen::VectorXcd project(const KernelEval& K, const ScalarField& g);

struct KernelEstimates {
  double theta = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double r0 = 0.0;
  // Least-squares intercept exp(b) of log|K| - phi(z) - phi(w) ~ b - theta |z - w|.
  double c1_fit = 0.0;
  double rms_residual = 0.0;
  std::vector<double> residuals;  // per probe pair, in input order
  bool valid = false;
};

struct ProbePair {
  Complex z;
  Complex w;
};

// theta and the fit come from all pairs; C1 is the smallest constant making the
// upper bound hold with that theta on every pair; C2 is the minimum of
// |K| exp(-phi(z) - phi(w)) over pairs with |z - w| <= r0.
KernelEstimates fit_kernel_estimates(const KernelEval& K, std::span<const ProbePair> pairs, double r0);

// Max relative deviation of the basis-sum kernel from the closed form over a
// grid on |z|, |w| <= box. Gaussian weights only.
double truncation_error(const FockBasis& basis, double box, int grid = 7);

// Raises the degree by `step` until truncation_error(box) < tol.
FockBasis build_certified_basis(const WeightModel& w, int degree, const PlaneRule& rule, double box,
                                double tol = 1e-8, int step = 10, int max_degree = 200);

}  // namespace focklab
