#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "focklab/dbar.hpp"
#include "focklab/decomposition.hpp"
#include "focklab/fock.hpp"
#include "focklab/lattice.hpp"
#include "focklab/oscillation.hpp"
#include "focklab/symbols.hpp"

namespace focklab {

inline constexpr int kDefaultMargin = 10;

// Plane rule large enough for a projection basis of degree D + margin + 5
// (the extra 5 covers the stability certificate).
PlaneRule hankel_plane_rule(const WeightModel& w, int degree, int margin = kDefaultMargin, int order = 0);

// Gram of the images H_f e_j, j <= D, with the projection truncated at D' = D + margin.
struct HankelGram {
  std::string symbol;
  int degree = 0;
  int margin = 0;
  int projection_degree = 0;
  // <f e_j, f e_k> - sum_{m <= D'} <f e_j, e_m> conj(<f e_k, e_m>)
  Eigen::MatrixXcd G;
  // Upper-triangular T with T^* T equal to the Gram of the sampled images.
  Eigen::MatrixXcd factor;
  double min_eigenvalue = 0.0;
  double trace = 0.0;
  double energy = 0.0;  // trace of the unprojected Gram <f e_j, f e_k>
};

HankelGram build_hankel_gram(const Symbol& f, const FockBasis& B, int margin = kDefaultMargin);

struct SingularSpectrum {
  std::vector<double> values;  // non-increasing
  int degree = 0;
  int projection_degree = 0;
  std::string quadrature;
  // Largest change of the top singular values when the margin grows by 5.
  double certificate_shift = 0.0;
  bool certified = false;
};

// Raises numerical_consistency when G has an eigenvalue below -1e-10 energy.
SingularSpectrum singular_spectrum(const HankelGram& G);

// Spectrum at the given margin plus the margin + 5 stability certificate.
SingularSpectrum hankel_spectrum(const Symbol& f, const FockBasis& B, int margin = kDefaultMargin);

struct TailEstimate {
  double estimate = 0.0;
  double slope = 0.0;
  std::size_t first = 0, last = 0;  // plateau window, 0-based inclusive
  bool reliable = true;
};

// Median of s_k over k in [lo * D, hi * D] with a least-squares slope diagnostic.
TailEstimate essential_norm_tail(const SingularSpectrum& S, double lo = 0.5, double hi = 0.75);

enum class GaugeFamily { power, exp_minus_one, custom_grid };

class SchattenGauge {
 public:
  static SchattenGauge power(double p);
  static SchattenGauge exp_minus_one();
  // Piecewise-linear through (ts, hs); linear extrapolation past the last point.
  static SchattenGauge custom_grid(std::vector<double> ts, std::vector<double> hs);

  double operator()(double t) const;
  GaugeFamily family() const { return family_; }
  std::string describe() const;
  // Midpoint convexity of h(sqrt(t)) on a grid, within 1e-10.
  bool sqrt_convex() const { return sqrt_convex_; }

 private:
  SchattenGauge() = default;
  void validate();

  GaugeFamily family_ = GaugeFamily::power;
  double p_ = 2.0;
  std::vector<double> ts_, hs_;
  bool sqrt_convex_ = false;
};

struct SeriesReport {
  std::vector<double> partial_sums;
  double total = 0.0;
  double tail_ratio = 0.0;  // last-quartile increment / total
  bool convergent = true;
};

// Convergent when the last quarter of the terms adds less than 1e-3 of the total.
SeriesReport series_report(const std::vector<double>& terms);

SeriesReport schatten_sum(const SingularSpectrum& S, const SchattenGauge& h, double c = 1.0);

// ||H_f k_z||_{q,phi}, with P truncated at the basis degree.
double hankel_on_kernel(const Symbol& f, Complex z, double q, const FockBasis& B);

RadialProfile kernel_profile(const Symbol& f, double q, const FockBasis& B, const std::vector<double>& shells,
                             int angles = 8);

// s(rho) = 1 - 3u^2 + 2u^3 with u = rho - t on [t, t + 1].
class SmoothCutoff {
 public:
  explicit SmoothCutoff(double t);
  double t() const { return t_; }
  double operator()(Complex z) const;
  Complex dbar(Complex z) const;
  double gradient_norm(Complex z) const;
  // Max |grad sigma| over a polar grid covering the ramp.
  double max_gradient_on_grid(int radial = 200, int angular = 16) const;

 private:
  double t_;
};

SmoothCutoff smooth_cutoff(double t);

struct CompactApproximation {
  double t = 0.0;
  double gap = 0.0;
  std::vector<double> difference_spectrum;
  Symbol h_t;  // psi_t + sigma_t f2
};

// gap = ||H_f - H_{h_t}|| restricted to span{e_0..e_D}, where
// h_t = A(sigma_t dbar f1) + sigma_t f2. H of the first term is evaluated as
// (I - P) A(e_j sigma_t dbar f1), which avoids sampling the fast-growing
// function A(sigma_t dbar f1) itself.
CompactApproximation compact_approximant(const Decomposition& D, double t, const DbarSolver& solver,
                                         const FockBasis& B, int margin = kDefaultMargin);

struct MeasureModel {
  enum class Kind { lebesgue, density, atomic } kind = Kind::lebesgue;
  std::function<double(Complex)> density;
  std::vector<Complex> atoms;
  std::vector<double> masses;

  static MeasureModel lebesgue();
  static MeasureModel with_density(std::function<double(Complex)> g);
  static MeasureModel atomic(std::vector<Complex> points, std::vector<double> masses);
};

// int |k_z|^2 exp(-2 phi) d mu
double berezin_transform(const MeasureModel& mu, const KernelEval& K, Complex z, const PlaneRule& rule);
// mu(B(z, r)) / (pi r^2)
double measure_average(const MeasureModel& mu, Complex z, double r, int order = 24);

struct CriterionRow {
  double c = 0.0;
  SeriesReport integral;  // lattice Riemann sum of h(c G), ordered by |a|
  SeriesReport sum;       // sum_k h(c s_k)
  bool agree() const { return integral.convergent == sum.convergent; }
};

// G samples and singular values at or below zero_floor count as exact zeros;
// both sit at the resolution of their solvers there.
std::vector<CriterionRow> schatten_h_criterion(const Symbol& f, const SchattenGauge& h, double r, int d,
                                               const Lattice& L, const SingularSpectrum& S,
                                               const std::vector<double>& c_grid, double zero_floor = 1e-8);

}  // namespace focklab
