#pragma once

#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "focklab/lattice.hpp"
#include "focklab/quadrature.hpp"
#include "focklab/symbols.hpp"

namespace focklab {

inline constexpr int kDefaultBallOrder = 12;
inline constexpr int kDefaultLocalDegree = 6;

// (|B|^-1 int_B |f|^q dA)^(1/q) over the rule's ball.
double mean_oscillation(const Symbol& f, const BallRule& rule, double q);
double mean_oscillation(const Symbol& f, Complex z, double r, double q, int order = kDefaultBallOrder);

// Best holomorphic polynomial of degree <= d on a ball, in the scaled basis
// ((w - center) / radius)^j.
struct LocalApproximation {
  Complex center;
  double radius = 0.0;
  int degree = 0;
  double q = 2.0;
  Eigen::VectorXcd coeffs;
  double residual = 0.0;
  int iterations = 0;

  Complex operator()(Complex w) const;
  // Coefficients with respect to (w - center)^j.
  Eigen::VectorXcd unscaled_coefficients() const;
};

// q = 2 is a least-squares solve; q != 2 uses iteratively reweighted least
// squares started from the q = 2 solution.
LocalApproximation ida_distance(const Symbol& f, const BallRule& rule, double q, int d);
LocalApproximation ida_distance(const Symbol& f, Complex z, double r, double q, int d = kDefaultLocalDegree,
                                int order = kDefaultBallOrder);

// Residual for each degree 0..d (convergence report).
std::vector<double> ida_convergence(const Symbol& f, const BallRule& rule, double q, int d);

struct IdaNormResult {
  double value = 0.0;
  double s = 2.0;
  std::vector<double> samples;  // G at each lattice point, lattice order
  double boundary_fraction = 0.0;
  bool window_warning = false;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// s = infinity gives the max over lattice points; finite s gives the lattice
// Riemann sum (sum G^s * cell_area)^(1/s).
IdaNormResult ida_norm(const Symbol& f, double s, double q, double r, const Lattice& L,
                       int d = kDefaultLocalDegree, int order = kDefaultBallOrder);

// G: distance to holomorphic functions; M: mean oscillation; HK: ||H_f k_z||.
enum class Functional { G, M, HK };
const char* to_string(Functional f);

struct RadialProfile {
  Functional functional = Functional::G;
  double r = 0.0;
  double q = 2.0;
  int d = 0;
  std::vector<Complex> points;
  std::vector<double> shell_of_point;
  std::vector<double> values;
  std::vector<double> shells;
  std::vector<double> shell_max;
  double final_value = 0.0;
  double trend_slope = 0.0;  // least-squares slope of shell_max against shell radius
};

// Per-shell samples at `angles` equally spaced points on |z| = shell.
RadialProfile radial_profile(const Symbol& f, Functional which, double q, double r, int d,
                             const std::vector<double>& shells, int angles = 8, int order = kDefaultBallOrder);
RadialProfile vda_profile(const Symbol& f, double q, double r, int d, const std::vector<double>& shells,
                          int angles = 8, int order = kDefaultBallOrder);

// Least-squares slope of ys against xs.
double trend_slope(const std::vector<double>& xs, const std::vector<double>& ys);

struct FamilyCheck {
  bool support_ok = true;
  bool dbar_ok = true;
  bool holomorphic_ok = true;
  double dbar_deviation = 0.0;
  double holomorphic_residual = 0.0;
  bool pass() const { return support_ok && dbar_ok && holomorphic_ok; }
};

// Re-derives a symbol's declared metadata on probe points: compact support,
// closed-form dbar against central differences, holomorphy against G.
FamilyCheck check_symbol_metadata(const Symbol& f, const std::vector<Complex>& probes);

}  // namespace focklab
