#include "focklab/quadrature.hpp"

#include <cmath>

#include "focklab/error.hpp"

namespace focklab {

namespace {

constexpr int kMaxGaussLegendre = 4000;

}  // namespace

GaussLegendre gauss_legendre(int n, double a, double b) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "Gauss-Legendre order must be >= 1");
  if (n > kMaxGaussLegendre)
    throw Error(ErrorCode::capability, "Gauss-Legendre order " + std::to_string(n) + " exceeds the stable range");
  GaussLegendre g;
  g.nodes.resize(n);
  g.weights.resize(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    g.nodes[i] = mid - half * x;
    g.nodes[n - 1 - i] = mid + half * x;
    g.weights[i] = half * w;
    g.weights[n - 1 - i] = half * w;
  }
  return g;
}

double gaussian_cutoff_radius(double scale) {
  if (!(scale > 0.0)) throw Error(ErrorCode::invalid_argument, "Gaussian scale must be > 0");
  return std::sqrt(2.0 * std::log(1e16) / scale);
}

PlaneRule gaussian_plane_rule(int order, double scale, int angular_count, double r_cut) {
  if (order < 1) throw Error(ErrorCode::invalid_argument, "plane rule order must be >= 1");
  if (!(scale > 0.0)) throw Error(ErrorCode::invalid_argument, "plane rule scale must be > 0");
  if (angular_count < 0 || r_cut < 0.0)
    throw Error(ErrorCode::invalid_argument, "plane rule angular count and cutoff must be nonnegative");
  PlaneRule rule;
  rule.scale = scale;
  rule.r_cut = r_cut > 0.0 ? r_cut : gaussian_cutoff_radius(scale);
  rule.radial_order = order;
  rule.angular_count = angular_count > 0 ? angular_count : 2 * order + 1;

  const GaussLegendre radial = gauss_legendre(order, 0.0, rule.r_cut);
  const int na = rule.angular_count;
  const double dtheta = 2.0 * kPi / na;
  rule.nodes.reserve(static_cast<std::size_t>(order) * na);
  rule.weights.reserve(static_cast<std::size_t>(order) * na);
  for (int i = 0; i < order; ++i) {
    const double rho = radial.nodes[i];
    const double w = radial.weights[i] * rho * dtheta;
    for (int j = 0; j < na; ++j) {
      rule.nodes.push_back(std::polar(rho, j * dtheta));
      rule.weights.push_back(w);
    }
  }

  // Radial moments int_0^inf rho^(2k+1) exp(-scale rho^2) d rho = k! / (2 scale^(k+1)).
  int degree = -1;
  for (int k = 0; 2 * k < na; ++k) {
    double approx = 0.0;
    for (int i = 0; i < order; ++i) {
      const double rho = radial.nodes[i];
      approx += radial.weights[i] * std::exp((2 * k + 1) * std::log(rho) - scale * rho * rho);
    }
    const double exact = std::exp(std::lgamma(k + 1.0) - (k + 1.0) * std::log(scale)) / 2.0;
    if (std::abs(approx - exact) > 1e-12 * exact) break;
    degree = std::min(2 * k + 1, na - 1);
  }
  rule.exactness_degree = degree;
  return rule;
}

BallRule BallRule::shifted(Complex to) const {
  BallRule out = *this;
  for (Complex& n : out.nodes) n = n - center + to;
  out.center = to;
  return out;
}

BallRule ball_rule(Complex center, double r, int order) {
  if (!(r > 0.0)) throw Error(ErrorCode::invalid_argument, "ball radius must be > 0");
  if (order < 1) throw Error(ErrorCode::invalid_argument, "ball rule order must be >= 1");
  BallRule rule;
  rule.center = center;
  rule.radius = r;
  rule.order = order;
  const GaussLegendre radial = gauss_legendre(order, 0.0, r);
  const int na = 2 * order + 1;
  const double dtheta = 2.0 * kPi / na;
  rule.nodes.reserve(static_cast<std::size_t>(order) * na);
  rule.weights.reserve(static_cast<std::size_t>(order) * na);
  for (int i = 0; i < order; ++i) {
    const double rho = radial.nodes[i];
    const double w = radial.weights[i] * rho * dtheta;
    for (int j = 0; j < na; ++j) {
      rule.nodes.push_back(center + std::polar(rho, j * dtheta));
      rule.weights.push_back(w);
    }
  }
  return rule;
}

}  // namespace focklab
