#include "focklab/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "focklab/error.hpp"
#include "focklab/parallel.hpp"

namespace focklab {

namespace {

constexpr int kRadialNodes = 600;
constexpr double kLeakTolerance = 1e-12;

// log of rho^(2k+1) exp(-2 phi(rho)), the radial density of c_k^2 / (2 pi).
double radial_log_density(const WeightModel& w, int k, double rho) {
  return (2.0 * k + 1.0) * std::log(rho) - 2.0 * w.radial_value(rho);
}

struct RadialWindow {
  double peak_log = 0.0;
  double upper = 0.0;  // density below peak * exp(-drop) beyond this radius
};

RadialWindow radial_window(const WeightModel& w, int k, double drop) {
  const double h = 1e-2;
  RadialWindow out;
  out.peak_log = -std::numeric_limits<double>::infinity();
  for (int i = 1; i < 10'000'000; ++i) {
    const double rho = i * h;
    const double g = radial_log_density(w, k, rho);
    if (!std::isfinite(g) && g != -std::numeric_limits<double>::infinity())
      throw Error(ErrorCode::evaluation, "non-finite radial weight at rho=" + std::to_string(rho));
    if (g > out.peak_log) out.peak_log = g;
    if (g < out.peak_log - drop) {
      out.upper = rho;
      return out;
    }
  }
  throw Error(ErrorCode::degree_cap, "radial density does not decay for degree " + std::to_string(k));
}

// log of 2 pi int_a^b rho^(2k+1) exp(-2 phi) d rho, shifted by the peak.
double log_radial_integral(const WeightModel& w, int k, double a, double b, const GaussLegendre& unit,
                           double peak_log) {
  double acc = 0.0;
  const double len = b - a;
  for (std::size_t i = 0; i < unit.nodes.size(); ++i) {
    const double rho = a + len * unit.nodes[i];
    acc += unit.weights[i] * std::exp(radial_log_density(w, k, rho) - peak_log);
  }
  return std::log(2.0 * kPi) + peak_log + std::log(acc * len);
}

double plane_scale(const WeightModel& w) {
  return w.kind() == WeightKind::custom ? w.m() : w.alpha();
}

}  // namespace

FockBasis::FockBasis(WeightModel weight, int degree, PlaneRule rule)
    : weight_(std::move(weight)), degree_(degree), rule_(std::make_shared<const PlaneRule>(std::move(rule))) {
  if (degree_ < 0) throw Error(ErrorCode::invalid_argument, "basis degree must be >= 0");
  if (weight_.dimension() != 1) throw Error(ErrorCode::capability, "basis construction supports n = 1 only");
  if (!weight_.is_radial())
    throw Error(ErrorCode::capability,
                "basis construction needs a radial weight; " + weight_.describe() + " is not radial");

  const GaussLegendre unit = gauss_legendre(kRadialNodes, 0.0, 1.0);
  const double r_cut = rule_->r_cut;
  log_c_.resize(size());
  for (int k = 0; k <= degree_; ++k) {
    const RadialWindow win = radial_window(weight_, k, 80.0);
    const double log_total = log_radial_integral(weight_, k, 0.0, win.upper, unit, win.peak_log);
    if (!std::isfinite(log_total))
      throw Error(ErrorCode::degree_cap, "normalization of degree " + std::to_string(k) + " is not finite");
    log_c_[k] = 0.5 * log_total;
    if (win.upper > r_cut) {
      const double log_leak = log_radial_integral(weight_, k, r_cut, win.upper, unit, win.peak_log);
      if (std::exp(log_leak - log_total) > kLeakTolerance) {
        throw Error(ErrorCode::degree_cap,
                    "degree " + std::to_string(k) + " carries mass beyond the quadrature cutoff " +
                        std::to_string(r_cut) + "; largest supported degree is " + std::to_string(k - 1));
      }
    }
  }
}

double FockBasis::norm_sq(int k) const { return std::exp(2.0 * log_c_.at(k)); }

Complex FockBasis::value(int k, Complex z) const {
  if (k < 0 || k > degree_) throw Error(ErrorCode::invalid_argument, "basis index out of range");
  if (z == Complex{}) return k == 0 ? Complex(std::exp(-log_c_[0])) : Complex{};
  const double mag = std::exp(k * std::log(std::abs(z)) - log_c_[k]);
  return std::polar(mag, k * std::arg(z));
}

void FockBasis::weighted_values(Complex z, std::span<Complex> out) const {
  const double phi = weight_.value(z);
  const double r = std::abs(z);
  if (r == 0.0) {
    std::fill(out.begin(), out.end(), Complex{});
    out[0] = std::exp(-log_c_[0] - phi);
    return;
  }
  const double lr = std::log(r);
  const Complex u = z / r;
  Complex phase = 1.0;
  for (int k = 0; k <= degree_; ++k) {
    out[k] = std::exp(k * lr - log_c_[k] - phi) * phase;
    phase *= u;
  }
}

std::vector<Complex> FockBasis::weighted_values(Complex z) const {
  std::vector<Complex> out(size());
  weighted_values(z, out);
  return out;
}

Eigen::MatrixXcd FockBasis::weighted_samples(std::span<const Complex> nodes) const {
  Eigen::MatrixXcd s(static_cast<Eigen::Index>(nodes.size()), static_cast<Eigen::Index>(size()));
  parallel_for(nodes.size(), [&](std::size_t i) {
    std::vector<Complex> row(size());
    weighted_values(nodes[i], row);
    for (std::size_t k = 0; k < row.size(); ++k)
      s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = row[k];
  });
  return s;
}

Eigen::VectorXcd FockBasis::project(const ScalarField& g) const {
  return project_weighted([&](Complex w) { return g(w) * std::exp(-weight_.value(w)); });
}

Eigen::VectorXcd FockBasis::project_weighted(const ScalarField& gw) const {
  const PlaneRule& rule = *rule_;
  const Eigen::MatrixXcd s = weighted_samples(rule.nodes);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(rule.size()));
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const Complex val = gw(rule.nodes[i]);
    if (!std::isfinite(val.real()) || !std::isfinite(val.imag()))
      throw Error(ErrorCode::evaluation, "non-finite integrand at " + format_point(rule.nodes[i]));
    v(static_cast<Eigen::Index>(i)) = val * rule.weights[i];
  }
  return s.adjoint() * v;
}

Complex FockBasis::synthesize(const Eigen::VectorXcd& coeffs, Complex z) const {
  Complex acc{};
  const Eigen::Index n = std::min<Eigen::Index>(coeffs.size(), static_cast<Eigen::Index>(size()));
  for (Eigen::Index k = 0; k < n; ++k) acc += coeffs(k) * value(static_cast<int>(k), z);
  return acc;
}

FockBasis build_basis(const WeightModel& w, int degree, const PlaneRule& rule) {
  return FockBasis(w, degree, rule);
}

double basis_cutoff_radius(const WeightModel& w, int degree) {
  if (!w.is_radial()) throw Error(ErrorCode::capability, "basis cutoff needs a radial weight");
  double r = gaussian_cutoff_radius(plane_scale(w));
  for (int k = 0; k <= degree; ++k) r = std::max(r, radial_window(w, k, std::log(1e16)).upper);
  return r;
}

PlaneRule basis_plane_rule(const WeightModel& w, int degree, int order, int angular) {
  const double r_cut = basis_cutoff_radius(w, degree);
  if (order <= 0) {
    const double span = r_cut * std::sqrt(plane_scale(w));
    order = std::max(40, static_cast<int>(std::ceil(4.0 * span)) + degree);
  }
  if (angular <= 0) angular = std::max(2 * order + 1, 4 * degree + 9);
  return gaussian_plane_rule(order, plane_scale(w), angular, r_cut);
}

KernelEval::KernelEval(FockBasis basis, KernelMode mode) : basis_(std::move(basis)), mode_(mode) {
  if (mode_ == KernelMode::closed_form_gaussian && !(basis_.weight().kind() == WeightKind::gaussian ||
                                                     (basis_.weight().kind() == WeightKind::perturbed_gaussian &&
                                                      basis_.weight().epsilon() == 0.0)))
    throw Error(ErrorCode::capability, "closed-form kernel is available for gaussian weights only");
}

Complex KernelEval::operator()(Complex z, Complex w) const {
  if (mode_ == KernelMode::closed_form_gaussian) {
    const double a = basis_.weight().alpha();
    return a / kPi * std::exp(a * z * std::conj(w));
  }
  Complex acc{};
  for (int k = 0; k <= basis_.degree(); ++k) acc += basis_.value(k, z) * std::conj(basis_.value(k, w));
  return acc;
}

Complex KernelEval::weighted(Complex z, Complex w) const {
  const WeightModel& wt = basis_.weight();
  if (mode_ == KernelMode::closed_form_gaussian) {
    const double a = wt.alpha();
    return a / kPi * std::exp(a * z * std::conj(w) - wt.value(z) - wt.value(w));
  }
  const std::vector<Complex> ez = basis_.weighted_values(z);
  const std::vector<Complex> ew = basis_.weighted_values(w);
  Complex acc{};
  for (std::size_t k = 0; k < ez.size(); ++k) acc += ez[k] * std::conj(ew[k]);
  return acc;
}

Complex kernel(const KernelEval& K, Complex z, Complex w) { return K(z, w); }

namespace {

double checked_diagonal(const KernelEval& K, Complex z) {
  const double kzz = K.weighted(z, z).real();
  if (!(kzz > 0.0) || !std::isfinite(kzz))
    throw Error(ErrorCode::degree_cap, "K(z,z) is not positive at " + format_point(z) + "; raise the degree");
  return kzz;
}

}  // namespace

ScalarField normalized_kernel(const KernelEval& K, Complex z) {
  const double kzz = K(z, z).real();
  if (!(kzz > 0.0) || !std::isfinite(kzz))
    throw Error(ErrorCode::degree_cap, "K(z,z) is not positive at " + format_point(z) + "; raise the degree");
  const double scale = 1.0 / std::sqrt(kzz);
  return [K, z, scale](Complex w) { return K(w, z) * scale; };
}

ScalarField weighted_normalized_kernel(const KernelEval& K, Complex z) {
  const double scale = 1.0 / std::sqrt(checked_diagonal(K, z));
  return [K, z, scale](Complex w) { return K.weighted(w, z) * scale; };
}

double lp_norm_weighted(const ScalarField& fw, double p, const PlaneRule& rule) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorCode::invalid_argument, "lp_norm needs p in [1, inf)");
  const double total = integrate(rule, [&](Complex z) {
    const double a = std::abs(fw(z));
    if (!std::isfinite(a)) throw Error(ErrorCode::evaluation, "non-finite sample at " + format_point(z));
    return std::pow(a, p);
  });
  return std::pow(total, 1.0 / p);
}

double lp_norm(const ScalarField& f, double p, const PlaneRule& rule, const WeightModel& w) {
  return lp_norm_weighted([&](Complex z) { return f(z) * std::exp(-w.value(z)); }, p, rule);
}

Eigen::VectorXcd project(const KernelEval& K, const ScalarField& g) { return K.basis().project(g); }

KernelEstimates fit_kernel_estimates(const KernelEval& K, std::span<const ProbePair> pairs, double r0) {
  if (pairs.empty()) throw Error(ErrorCode::invalid_argument, "fit_kernel_estimates needs probe pairs");
  if (!(r0 > 0.0)) throw Error(ErrorCode::invalid_argument, "fit_kernel_estimates needs r0 > 0");
  const std::size_t n = pairs.size();
  std::vector<double> d(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = std::abs(pairs[i].z - pairs[i].w);
    y[i] = std::log(std::abs(K.weighted(pairs[i].z, pairs[i].w)));
  }

  KernelEstimates est;
  est.r0 = r0;
  double sd = 0, sy = 0, sdd = 0, sdy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sd += d[i];
    sy += y[i];
    sdd += d[i] * d[i];
    sdy += d[i] * y[i];
  }
  const double det = n * sdd - sd * sd;
  double slope = 0.0;
  double intercept = sy / n;
  if (det > 1e-14 * n * sdd) {
    slope = (n * sdy - sd * sy) / det;
    intercept = (sy - slope * sd) / n;
  }
  est.theta = -slope;
  est.c1_fit = std::exp(intercept);

  double ss = 0.0;
  double env = -std::numeric_limits<double>::infinity();
  double lower = std::numeric_limits<double>::infinity();
  est.residuals.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    est.residuals[i] = y[i] - (intercept + slope * d[i]);
    ss += est.residuals[i] * est.residuals[i];
    env = std::max(env, y[i] + est.theta * d[i]);
    if (d[i] <= r0) lower = std::min(lower, y[i]);
  }
  est.rms_residual = std::sqrt(ss / n);
  est.c1 = std::exp(env);
  est.c2 = std::isfinite(lower) ? std::exp(lower) : 0.0;
  est.valid = est.theta > 0.0 && est.c1 > 0.0 && est.c2 > 0.0;
  return est;
}

double truncation_error(const FockBasis& basis, double box, int grid) {
  if (grid < 2) throw Error(ErrorCode::invalid_argument, "truncation grid needs >= 2 points per side");
  const KernelEval sum(basis, KernelMode::basis_sum);
  const KernelEval closed(basis, KernelMode::closed_form_gaussian);
  std::vector<Complex> pts;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) {
      const Complex z(-box + 2.0 * box * i / (grid - 1), -box + 2.0 * box * j / (grid - 1));
      if (std::abs(z) <= box * (1 + 1e-12)) pts.push_back(z);
    }
  double worst = 0.0;
  for (const Complex z : pts)
    for (const Complex w : pts) {
      const Complex exact = closed(z, w);
      worst = std::max(worst, std::abs(sum(z, w) - exact) / std::abs(exact));
    }
  return worst;
}

FockBasis build_certified_basis(const WeightModel& w, int degree, const PlaneRule& rule, double box, double tol,
                                int step, int max_degree) {
  for (int d = degree; d <= max_degree; d += step) {
    FockBasis b(w, d, rule);
    if (truncation_error(b, box) < tol) return b;
  }
  throw Error(ErrorCode::degree_cap, "no degree up to " + std::to_string(max_degree) +
                                         " meets the kernel truncation tolerance on the probe box");
}

}  // namespace focklab
