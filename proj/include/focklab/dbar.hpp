#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "focklab/fock.hpp"
#include "focklab/symbols.hpp"
#include "focklab/weight.hpp"

namespace focklab {

enum class DecayTag { gaussian, compact, uncertified };

// The (0,1)-form w(xi) d conj(xi). When `weighted` is set, `coeff` already
// includes the factor exp(-phi(xi)).
struct ZeroOneForm {
  ScalarField coeff;
  bool weighted = false;
  DecayTag decay = DecayTag::gaussian;
  double radius = 0.0;  // support radius for compact forms
};

// Polar rule centered at the evaluation point: Gauss-Legendre radial panels
// [0, inner_radius] and [inner_radius, outer_radius] times a uniform angular grid.
struct DbarRule {
  int inner_order = 12;
  int outer_order = 40;
  int angular = 64;
  double inner_radius = 0.5;
  double outer_radius = 0.0;  // 0 selects the Gaussian cutoff for the weight's lower bound m

  // Same rule with every node count doubled.
  DbarRule refined() const;
};

struct CalibrationCandidate {
  Complex value;
  std::string label;
  double residual = 0.0;
};

struct CalibrationReport {
  Complex c0;
  std::string label;
  double residual = 0.0;
  bool unique = false;
  std::vector<CalibrationCandidate> candidates;
};

// The n = 1 reduction u(z) = c0 int exp(2 dphi(xi) (z - xi)) w(xi) / (xi - z) dA(xi).
class DbarSolver {
 public:
  explicit DbarSolver(WeightModel weight, DbarRule rule = {});

  const WeightModel& weight() const { return weight_; }
  const DbarRule& rule() const { return rule_; }
  // Outer radius actually used by the rule.
  double reach() const;
  bool calibrated() const { return c0_.has_value(); }
  Complex c0() const;
  void set_c0(Complex c0) { c0_ = c0; }

  // u(z) exp(-phi(z)) with the orientation constant set to one.
  Complex apply_raw_weighted(const ZeroOneForm& form, Complex z) const;
  Complex apply_weighted(const ZeroOneForm& form, Complex z) const;
  Complex apply(const ZeroOneForm& form, Complex z) const;

  // For every j <= basis degree: A(e_j w)(z) exp(-phi(z)), w unweighted and compactly supported.
  Eigen::VectorXcd apply_moments_weighted(const ZeroOneForm& form, const FockBasis& basis, Complex z) const;

  // dbar u(z) by central differences with step h, from weighted evaluations.
  Complex dbar_of_solution(const ZeroOneForm& form, Complex z, double h = 1e-3) const;

  CalibrationReport calibrate(const std::vector<ZeroOneForm>& family, const std::vector<Complex>& probes,
                              double h = 1e-3);

 private:
  struct Node {
    Complex offset;
    Complex weight_over_offset;  // quadrature weight / offset
  };
  void check_decay(const ZeroOneForm& form) const;
  // exp(2 dphi(xi)(z - xi) + phi(xi) - phi(z))
  Complex transport(Complex xi, Complex z) const;

  WeightModel weight_;
  DbarRule rule_;
  std::vector<Node> nodes_;
  std::optional<Complex> c0_;
};

// Forms with closed-form potentials: w = dbar v for v in
// {conj(xi) e^{-|xi|^2}, e^{-|xi|^2}, conj(xi)^2 e^{-|xi - 1/2|^2}, ...}.
struct TestForm {
  ZeroOneForm form;
  ScalarField potential;
  std::string name;
};
std::vector<TestForm> gaussian_test_family(int count = 3);

std::vector<CalibrationCandidate> orientation_candidates();

Complex apply_A(const DbarSolver& solver, const ZeroOneForm& form, Complex z);
CalibrationReport calibrate_orientation(DbarSolver& solver, const std::vector<ZeroOneForm>& family,
                                        const std::vector<Complex>& probes);

struct ResidualRow {
  Complex z;
  double residual = 0.0;  // |dbar u - w|
  double magnitude = 0.0; // |w|
};

// |dbar A(w) - w| on the probes, from central differences.
std::vector<ResidualRow> solution_residuals(const DbarSolver& solver, const ZeroOneForm& form,
                                            const std::vector<Complex>& probes, double h = 1e-3);

// ||A(w)||_{p,phi} / ||w||_{p,phi} on the plane rule; 0 when w vanishes.
double verify_lp_bound(const DbarSolver& solver, const ZeroOneForm& form, double p, const PlaneRule& rule);

struct HankelIdentityReport {
  std::vector<Complex> via_dbar;   // (A(g dbar f) - P A(g dbar f)) exp(-phi) at the basis rule nodes
  std::vector<Complex> direct;     // (f g - P(f g)) exp(-phi) at the same nodes
  double direct_norm = 0.0;
  double difference_norm = 0.0;
  double relative_error = 0.0;
};

// gw(w) = g(w) exp(-phi(w)) for g in the kernel span.
HankelIdentityReport hankel_via_dbar(const DbarSolver& solver, const Symbol& f, const ScalarField& gw,
                                     const FockBasis& basis);

}  // namespace focklab
