#include "focklab/oscillation.hpp"

#include <algorithm>
#include <cmath>

#include "focklab/error.hpp"
#include "focklab/parallel.hpp"

namespace focklab {

namespace {

constexpr int kIrlsIterations = 25;
constexpr double kIrlsTolerance = 1e-8;
constexpr double kConditionFloor = 1e-10;

void check_q(double q) {
  if (!(q >= 1.0) || !std::isfinite(q)) throw Error(ErrorCode::invalid_argument, "q must be a finite value >= 1");
}

std::vector<Complex> sample(const Symbol& f, const BallRule& rule) {
  std::vector<Complex> v(rule.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = f(rule.nodes[i]);
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag()))
      throw Error(ErrorCode::evaluation, "symbol is not finite at " + format_point(rule.nodes[i]));
  }
  return v;
}

Eigen::MatrixXcd scaled_design(const BallRule& rule, int d) {
  Eigen::MatrixXcd a(static_cast<Eigen::Index>(rule.size()), d + 1);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const Complex u = (rule.nodes[i] - rule.center) / rule.radius;
    Complex p = 1.0;
    for (int j = 0; j <= d; ++j) {
      a(static_cast<Eigen::Index>(i), j) = p;
      p *= u;
    }
  }
  return a;
}

// Weighted least squares min sum_i wt_i |a_i c - b_i|^2 by Householder QR.
Eigen::VectorXcd weighted_solve(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b, const Eigen::VectorXd& wt,
                                int d) {
  const Eigen::VectorXd sw = wt.cwiseSqrt();
  const Eigen::MatrixXcd aw = sw.asDiagonal() * a;
  const Eigen::VectorXcd bw = sw.asDiagonal() * b;
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(aw);
  const Eigen::MatrixXcd& packed = qr.matrixQR();
  double rmax = 0.0;
  for (int j = 0; j <= d; ++j) rmax = std::max(rmax, std::abs(packed(j, j)));
  int stable = -1;
  for (int j = 0; j <= d; ++j) {
    if (!(std::abs(packed(j, j)) > kConditionFloor * rmax)) break;
    stable = j;
  }
  if (stable < d)
    throw Error(ErrorCode::degree_cap, "local polynomial system is ill-conditioned at degree " + std::to_string(d) +
                                           "; largest stable degree is " + std::to_string(stable));
  return qr.solve(bw);
}

double residual_power_sum(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& c, const Eigen::VectorXcd& b,
                          const BallRule& rule, double q, Eigen::VectorXd* abs_res) {
  const Eigen::VectorXcd res = b - a * c;
  std::vector<double> terms(rule.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const double m = std::abs(res(static_cast<Eigen::Index>(i)));
    if (abs_res) (*abs_res)(static_cast<Eigen::Index>(i)) = m;
    terms[i] = rule.weights[i] * (q == 2.0 ? m * m : std::pow(m, q));
  }
  return pairwise_sum(std::span<const double>(terms));
}

}  // namespace

double mean_oscillation(const Symbol& f, const BallRule& rule, double q) {
  check_q(q);
  const std::vector<Complex> v = sample(f, rule);
  std::vector<double> terms(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) terms[i] = rule.weights[i] * std::pow(std::abs(v[i]), q);
  const double area = kPi * rule.radius * rule.radius;
  return std::pow(pairwise_sum(std::span<const double>(terms)) / area, 1.0 / q);
}

double mean_oscillation(const Symbol& f, Complex z, double r, double q, int order) {
  return mean_oscillation(f, ball_rule(z, r, order), q);
}

Complex LocalApproximation::operator()(Complex w) const {
  const Complex u = (w - center) / radius;
  Complex acc{};
  for (Eigen::Index j = coeffs.size() - 1; j >= 0; --j) acc = acc * u + coeffs(j);
  return acc;
}

Eigen::VectorXcd LocalApproximation::unscaled_coefficients() const {
  Eigen::VectorXcd out = coeffs;
  for (Eigen::Index j = 0; j < out.size(); ++j) out(j) /= std::pow(radius, static_cast<double>(j));
  return out;
}

LocalApproximation ida_distance(const Symbol& f, const BallRule& rule, double q, int d) {
  check_q(q);
  if (d < 0) throw Error(ErrorCode::invalid_argument, "local degree d must be >= 0");
  const std::vector<Complex> vals = sample(f, rule);
  const Eigen::VectorXcd b = Eigen::Map<const Eigen::VectorXcd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
  const Eigen::VectorXd wt =
      Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), static_cast<Eigen::Index>(rule.weights.size()));
  const Eigen::MatrixXcd a = scaled_design(rule, d);
  const double area = kPi * rule.radius * rule.radius;

  LocalApproximation out;
  out.center = rule.center;
  out.radius = rule.radius;
  out.degree = d;
  out.q = q;
  out.coeffs = weighted_solve(a, b, wt, d);

  Eigen::VectorXd abs_res(b.size());
  double best = residual_power_sum(a, out.coeffs, b, rule, q, &abs_res);
  if (q != 2.0) {
    Eigen::VectorXcd c = out.coeffs;
    double prev = best;
    for (int it = 1; it <= kIrlsIterations; ++it) {
      const double floor = std::max(abs_res.maxCoeff() * 1e-12, 1e-300);
      Eigen::VectorXd w2(wt.size());
      for (Eigen::Index i = 0; i < wt.size(); ++i) w2(i) = wt(i) * std::pow(std::max(abs_res(i), floor), q - 2.0);
      c = weighted_solve(a, b, w2, d);
      const double obj = residual_power_sum(a, c, b, rule, q, &abs_res);
      out.iterations = it;
      if (obj < best) {
        best = obj;
        out.coeffs = c;
      }
      if (std::abs(prev - obj) <= kIrlsTolerance * std::max(prev, 1e-300)) break;
      prev = obj;
    }
  }
  out.residual = std::pow(std::max(best, 0.0) / area, 1.0 / q);
  return out;
}

LocalApproximation ida_distance(const Symbol& f, Complex z, double r, double q, int d, int order) {
  return ida_distance(f, ball_rule(z, r, order), q, d);
}

std::vector<double> ida_convergence(const Symbol& f, const BallRule& rule, double q, int d) {
  std::vector<double> out;
  for (int k = 0; k <= d; ++k) out.push_back(ida_distance(f, rule, q, k).residual);
  return out;
}

IdaNormResult ida_norm(const Symbol& f, double s, double q, double r, const Lattice& L, int d, int order) {
  if (!(s >= 1.0)) throw Error(ErrorCode::invalid_argument, "ida_norm exponent s must be in [1, inf]");
  if (!(r > 0.0)) throw Error(ErrorCode::invalid_argument, "ida_norm radius must be > 0");
  IdaNormResult out;
  out.s = s;
  const std::size_t n = L.size();
  out.samples.resize(n);
  const BallRule base = ball_rule(0.0, r, order);
  parallel_for(n, [&](std::size_t i) { out.samples[i] = ida_distance(f, base.shifted(L.point(i)), q, d).residual; });

  if (std::isinf(s)) {
    out.value = n ? *std::max_element(out.samples.begin(), out.samples.end()) : 0.0;
    return out;
  }
  std::vector<double> terms(n), edge(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    terms[i] = std::pow(out.samples[i], s) * L.cell_area();
    const auto [m, sidx] = L.coords(i);
    const bool boundary = m == L.m_min() || m == L.m_min() + L.m_count() - 1 || sidx == L.s_min() ||
                          sidx == L.s_min() + L.s_count() - 1;
    if (boundary) edge[i] = terms[i];
  }
  const double total = pairwise_sum(std::span<const double>(terms));
  const double edge_total = pairwise_sum(std::span<const double>(edge));
  out.value = std::pow(total, 1.0 / s);
  out.boundary_fraction = total > 0.0 ? edge_total / total : 0.0;
  out.window_warning = out.boundary_fraction > 0.01;
  return out;
}

const char* to_string(Functional f) {
  switch (f) {
    case Functional::G: return "G";
    case Functional::M: return "M";
    case Functional::HK: return "HK";
  }
  return "?";
}

double trend_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = std::min(xs.size(), ys.size());
  if (n < 2) return 0.0;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) mx += xs[i], my += ys[i];
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

RadialProfile radial_profile(const Symbol& f, Functional which, double q, double r, int d,
                             const std::vector<double>& shells, int angles, int order) {
  if (shells.empty()) throw Error(ErrorCode::invalid_argument, "profile needs at least one shell");
  for (std::size_t i = 1; i < shells.size(); ++i)
    if (!(shells[i] > shells[i - 1])) throw Error(ErrorCode::invalid_argument, "profile shells must be increasing");
  if (angles < 1) throw Error(ErrorCode::invalid_argument, "profile needs at least one angle per shell");
  if (which == Functional::HK) throw Error(ErrorCode::invalid_argument, "kernel profiles are built by the spectral layer");
  check_q(q);

  RadialProfile p;
  p.functional = which;
  p.r = r;
  p.q = q;
  p.d = d;
  p.shells = shells;
  for (double rho : shells)
    for (int k = 0; k < angles; ++k) {
      p.points.push_back(std::polar(rho, 2.0 * kPi * k / angles));
      p.shell_of_point.push_back(rho);
    }
  p.values.resize(p.points.size());
  const BallRule base = ball_rule(0.0, r, order);
  parallel_for(p.points.size(), [&](std::size_t i) {
    const BallRule rule = base.shifted(p.points[i]);
    p.values[i] = which == Functional::G ? ida_distance(f, rule, q, d).residual : mean_oscillation(f, rule, q);
  });
  p.shell_max.assign(shells.size(), 0.0);
  for (std::size_t i = 0; i < p.points.size(); ++i) {
    const std::size_t s = i / static_cast<std::size_t>(angles);
    p.shell_max[s] = std::max(p.shell_max[s], p.values[i]);
  }
  p.final_value = p.shell_max.back();
  p.trend_slope = trend_slope(p.shells, p.shell_max);
  return p;
}

RadialProfile vda_profile(const Symbol& f, double q, double r, int d, const std::vector<double>& shells, int angles,
                          int order) {
  return radial_profile(f, Functional::G, q, r, d, shells, angles, order);
}

FamilyCheck check_symbol_metadata(const Symbol& f, const std::vector<Complex>& probes) {
  FamilyCheck c;
  const double h = 1e-5;
  for (const Complex z : probes) {
    if (f.support == SupportHint::compact && std::abs(z) > f.support_radius && std::abs(f(z)) != 0.0)
      c.support_ok = false;
    if (f.has_dbar() && f.smoothness != Smoothness::measurable) {
      const Complex fx = (f(z + h) - f(z - h)) / (2 * h);
      const Complex fy = (f(z + Complex(0, h)) - f(z - Complex(0, h))) / (2 * h);
      const Complex fd = 0.5 * (fx + Complex(0, 1) * fy);
      // The C1 families have a derivative kink on their support circle.
      const bool near_kink =
          f.support == SupportHint::compact && std::abs(std::abs(z) - f.support_radius) < 10 * h;
      if (!near_kink) c.dbar_deviation = std::max(c.dbar_deviation, std::abs(fd - f.dbar(z)));
    }
    if (f.holomorphic)
      c.holomorphic_residual = std::max(c.holomorphic_residual, ida_distance(f, z, 0.5, 2.0).residual);
  }
  c.dbar_ok = c.dbar_deviation < 1e-6;
  c.holomorphic_ok = c.holomorphic_residual < 1e-9;
  return c;
}

}  // namespace focklab
