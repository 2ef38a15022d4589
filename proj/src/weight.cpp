#include "focklab/weight.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "focklab/error.hpp"

namespace focklab {

WeightModel WeightModel::gaussian(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw Error(ErrorCode::invalid_argument, "gaussian weight needs alpha > 0");
  WeightModel w;
  w.kind_ = WeightKind::gaussian;
  w.alpha_ = alpha;
  w.m_ = alpha;
  w.M_ = alpha;
  return w;
}

WeightModel WeightModel::perturbed_gaussian(double alpha, double epsilon) {
  if (!(alpha > 0.0) || !std::isfinite(alpha) || !std::isfinite(epsilon))
    throw Error(ErrorCode::invalid_argument, "perturbed-gaussian weight needs alpha > 0");
  if (!(std::abs(epsilon) < alpha))
    throw Error(ErrorCode::invalid_argument, "perturbed-gaussian weight needs |epsilon| < alpha");
  WeightModel w;
  w.kind_ = WeightKind::perturbed_gaussian;
  w.alpha_ = alpha;
  w.epsilon_ = epsilon;
  w.m_ = alpha - std::abs(epsilon);
  w.M_ = alpha + std::abs(epsilon);
  return w;
}

WeightModel WeightModel::custom(Custom c, double m, double M) {
  if (!c.value || !c.gradient || !c.hessian)
    throw Error(ErrorCode::invalid_argument, "custom weight needs value, gradient and hessian");
  if (!(m > 0.0) || !(m <= M) || !std::isfinite(M))
    throw Error(ErrorCode::invalid_argument, "custom weight bounds need 0 < m <= M");
  WeightModel w;
  w.kind_ = WeightKind::custom;
  w.m_ = m;
  w.M_ = M;
  w.custom_ = std::move(c);
  return w;
}

double WeightModel::value(Complex z) const {
  switch (kind_) {
    case WeightKind::gaussian:
      return 0.5 * alpha_ * std::norm(z);
    case WeightKind::perturbed_gaussian:
      return 0.5 * alpha_ * std::norm(z) + epsilon_ * std::sin(z.real());
    case WeightKind::custom:
      return custom_.value(z);
  }
  return 0.0;
}

Complex WeightModel::gradient(Complex z) const {
  switch (kind_) {
    case WeightKind::gaussian:
      return 0.5 * alpha_ * std::conj(z);
    case WeightKind::perturbed_gaussian:
      // d/dz of eps sin(x) is (1/2) eps cos(x).
      return 0.5 * alpha_ * std::conj(z) + 0.5 * epsilon_ * std::cos(z.real());
    case WeightKind::custom:
      return custom_.gradient(z);
  }
  return {};
}

Eigen::Matrix2d WeightModel::hessian(Complex z) const {
  Eigen::Matrix2d h;
  switch (kind_) {
    case WeightKind::gaussian:
      h << alpha_, 0.0, 0.0, alpha_;
      return h;
    case WeightKind::perturbed_gaussian:
      h << alpha_ - epsilon_ * std::sin(z.real()), 0.0, 0.0, alpha_;
      return h;
    case WeightKind::custom:
      return custom_.hessian(z);
  }
  return h;
}

bool WeightModel::is_radial() const {
  switch (kind_) {
    case WeightKind::gaussian: return true;
    case WeightKind::perturbed_gaussian: return epsilon_ == 0.0;
    case WeightKind::custom: return static_cast<bool>(custom_.radial);
  }
  return false;
}

double WeightModel::radial_value(double rho) const {
  if (!is_radial()) throw Error(ErrorCode::capability, "weight is not radial");
  if (kind_ == WeightKind::custom) return custom_.radial(rho);
  return 0.5 * alpha_ * rho * rho;
}

std::string WeightModel::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case WeightKind::gaussian: os << "gaussian(alpha=" << alpha_ << ")"; break;
    case WeightKind::perturbed_gaussian:
      os << "perturbed-gaussian(alpha=" << alpha_ << ",epsilon=" << epsilon_ << ")";
      break;
    case WeightKind::custom: os << "custom(m=" << m_ << ",M=" << M_ << ")"; break;
  }
  return os.str();
}

std::pair<double, double> symmetric_eigenvalues(const Eigen::Matrix2d& h) {
  const double a = h(0, 0);
  const double d = h(1, 1);
  const double b = 0.5 * (h(0, 1) + h(1, 0));
  const double mean = 0.5 * (a + d);
  const double rad = std::hypot(0.5 * (a - d), b);
  return {mean - rad, mean + rad};
}

CertificationReport certify_weight(const WeightModel& w, std::span<const Complex> probes, double tol) {
  if (probes.empty()) throw Error(ErrorCode::invalid_argument, "certify_weight needs at least one probe");
  if (!(tol > 0.0)) throw Error(ErrorCode::invalid_argument, "certify_weight needs tol > 0");

  CertificationReport rep;
  rep.min_eigenvalue = INFINITY;
  rep.max_eigenvalue = -INFINITY;
  rep.worst_point = probes.front();
  for (const Complex z : probes) {
    const double v = w.value(z);
    const Eigen::Matrix2d h = w.hessian(z);
    if (!std::isfinite(v) || !h.allFinite())
      throw Error(ErrorCode::evaluation, "non-finite weight data at " + format_point(z));
    const auto [lo, hi] = symmetric_eigenvalues(h);
    rep.probes.push_back({z, lo, hi});
    rep.min_eigenvalue = std::min(rep.min_eigenvalue, lo);
    rep.max_eigenvalue = std::max(rep.max_eigenvalue, hi);
    const double viol = std::max({0.0, w.m() - lo, hi - w.M()});
    if (viol > rep.worst_violation) {
      rep.worst_violation = viol;
      rep.worst_point = z;
    }
  }
  rep.pass = rep.worst_violation <= tol;
  return rep;
}

double finite_difference_check(const WeightModel& w, Complex z, double h) {
  if (!(h > 0.0)) throw Error(ErrorCode::invalid_argument, "finite_difference_check needs h > 0");
  const Complex ex(h, 0.0);
  const Complex ey(0.0, h);
  auto f = [&](Complex p) { return w.value(p); };

  const double fx = (f(z + ex) - f(z - ex)) / (2 * h);
  const double fy = (f(z + ey) - f(z - ey)) / (2 * h);
  const Complex grad_fd = 0.5 * Complex(fx, -fy);

  const double f0 = f(z);
  const double fxx = (f(z + ex) - 2 * f0 + f(z - ex)) / (h * h);
  const double fyy = (f(z + ey) - 2 * f0 + f(z - ey)) / (h * h);
  const double fxy = (f(z + ex + ey) - f(z + ex - ey) - f(z - ex + ey) + f(z - ex - ey)) / (4 * h * h);

  const Complex grad = w.gradient(z);
  const Eigen::Matrix2d hess = w.hessian(z);
  if (!std::isfinite(f0) || !std::isfinite(std::abs(grad)) || !hess.allFinite())
    throw Error(ErrorCode::evaluation, "non-finite weight data at " + format_point(z));

  double dev = std::abs(grad - grad_fd);
  dev = std::max(dev, std::abs(hess(0, 0) - fxx));
  dev = std::max(dev, std::abs(hess(1, 1) - fyy));
  dev = std::max(dev, std::abs(hess(0, 1) - fxy));
  dev = std::max(dev, std::abs(hess(1, 0) - fxy));
  return dev;
}

}  // namespace focklab
