#include "focklab/dbar.hpp"

#include <algorithm>
#include <cmath>

#include "focklab/error.hpp"
#include "focklab/parallel.hpp"

namespace focklab {

namespace {

constexpr double kCalibrationThreshold = 1e-2;

bool finite(Complex v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

}  // namespace

DbarRule DbarRule::refined() const {
  DbarRule r = *this;
  r.inner_order *= 2;
  r.outer_order *= 2;
  r.angular *= 2;
  return r;
}

DbarSolver::DbarSolver(WeightModel weight, DbarRule rule) : weight_(std::move(weight)), rule_(rule) {
  if (weight_.dimension() != 1) throw Error(ErrorCode::capability, "the dbar solver supports n = 1 only");
  if (rule_.inner_order < 1 || rule_.outer_order < 1 || rule_.angular < 1 || !(rule_.inner_radius > 0.0))
    throw Error(ErrorCode::invalid_argument, "dbar rule needs positive node counts and inner radius");
  if (!(rule_.outer_radius > 0.0)) rule_.outer_radius = gaussian_cutoff_radius(weight_.m());
  if (!(rule_.outer_radius > rule_.inner_radius))
    throw Error(ErrorCode::invalid_argument, "dbar rule outer radius must exceed the inner radius");

  const GaussLegendre inner = gauss_legendre(rule_.inner_order, 0.0, rule_.inner_radius);
  const GaussLegendre outer = gauss_legendre(rule_.outer_order, rule_.inner_radius, rule_.outer_radius);
  const double dtheta = 2.0 * kPi / rule_.angular;
  auto add_panel = [&](const GaussLegendre& g) {
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
      for (int k = 0; k < rule_.angular; ++k) {
        // (w_rho rho dtheta) / (rho e^{i theta}): the Cauchy singularity cancels the polar Jacobian.
        const double theta = (k + 0.5) * dtheta;
        nodes_.push_back({std::polar(g.nodes[i], theta), std::polar(g.weights[i] * dtheta, -theta)});
      }
  };
  add_panel(inner);
  add_panel(outer);
}

double DbarSolver::reach() const { return rule_.outer_radius; }

Complex DbarSolver::c0() const {
  if (!c0_) throw Error(ErrorCode::uncalibrated, "dbar solver orientation constant has not been calibrated");
  return *c0_;
}

void DbarSolver::check_decay(const ZeroOneForm& form) const {
  if (!form.coeff) throw Error(ErrorCode::invalid_argument, "form has no coefficient");
  if (form.decay == DecayTag::uncertified)
    throw Error(ErrorCode::refusal, "form decay is not certified; the dbar integral may not converge");
  if (form.decay == DecayTag::compact && !(form.radius >= 0.0))
    throw Error(ErrorCode::invalid_argument, "compact form needs a support radius");
}

Complex DbarSolver::transport(Complex xi, Complex z) const {
  const Complex e = 2.0 * weight_.gradient(xi) * (z - xi) + weight_.value(xi) - weight_.value(z);
  return std::exp(e);
}

Complex DbarSolver::apply_raw_weighted(const ZeroOneForm& form, Complex z) const {
  check_decay(form);
  const bool compact = form.decay == DecayTag::compact;
  const double r2 = form.radius * form.radius;
  std::vector<Complex> terms;
  terms.reserve(nodes_.size());
  for (const Node& n : nodes_) {
    const Complex xi = z + n.offset;
    if (compact && std::norm(xi) > r2) continue;
    Complex w = form.coeff(xi);
    if (!form.weighted) w *= std::exp(-weight_.value(xi));
    if (w == Complex{}) continue;
    const Complex t = w * transport(xi, z) * n.weight_over_offset;
    if (!finite(t)) throw Error(ErrorCode::evaluation, "non-finite dbar integrand at " + format_point(xi));
    terms.push_back(t);
  }
  return pairwise_sum(std::span<const Complex>(terms));
}

Complex DbarSolver::apply_weighted(const ZeroOneForm& form, Complex z) const {
  const Complex c = c0();
  return c * apply_raw_weighted(form, z);
}

Complex DbarSolver::apply(const ZeroOneForm& form, Complex z) const {
  return apply_weighted(form, z) * std::exp(weight_.value(z));
}

Eigen::VectorXcd DbarSolver::apply_moments_weighted(const ZeroOneForm& form, const FockBasis& basis,
                                                    Complex z) const {
  check_decay(form);
  const Complex c = c0();
  const int degree = basis.degree();
  std::vector<double> step(static_cast<std::size_t>(degree) + 1, 0.0);
  for (int j = 1; j <= degree; ++j) step[j] = std::exp(basis.log_norm(j - 1) - basis.log_norm(j));
  const double log_c0 = basis.log_norm(0);
  const bool compact = form.decay == DecayTag::compact;
  const double r2 = form.radius * form.radius;

  Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(degree + 1);
  for (const Node& n : nodes_) {
    const Complex xi = z + n.offset;
    if (compact && std::norm(xi) > r2) continue;
    Complex w = form.coeff(xi);
    if (w == Complex{}) continue;
    const double phi = weight_.value(xi);
    if (form.weighted) w *= std::exp(phi);
    const Complex t = w * transport(xi, z) * n.weight_over_offset;
    Complex e = std::exp(-phi - log_c0);
    acc(0) += t * e;
    for (int j = 1; j <= degree; ++j) {
      e *= xi * step[j];
      acc(j) += t * e;
    }
  }
  return c * acc;
}

namespace {

Complex central_dbar(const std::function<Complex(Complex)>& u, Complex z, double h) {
  const Complex dx = (u(z + h) - u(z - h)) / (2.0 * h);
  const Complex dy = (u(z + Complex(0, h)) - u(z - Complex(0, h))) / (2.0 * h);
  return 0.5 * (dx + Complex(0, 1) * dy);
}

}  // namespace

Complex DbarSolver::dbar_of_solution(const ZeroOneForm& form, Complex z, double h) const {
  const Complex c = c0();
  auto uw = [&](Complex p) { return c * apply_raw_weighted(form, p); };
  // dbar u = e^{phi} (dbar(u e^{-phi}) + u e^{-phi} dbar phi), dbar phi = conj(d phi) for real phi.
  const Complex d = central_dbar(uw, z, h) + uw(z) * std::conj(weight_.gradient(z));
  return d * std::exp(weight_.value(z));
}

std::vector<CalibrationCandidate> orientation_candidates() {
  const double ip = 1.0 / kPi;
  const Complex i(0, 1);
  return {
      {1.0, "+1"},           {-1.0, "-1"},           {i, "+i"},
      {-i, "-i"},            {ip, "+1/pi"},          {-ip, "-1/pi"},
      {i * ip, "+i/pi"},     {-i * ip, "-i/pi"},     {1.0 / (2.0 * kPi * i), "+1/(2 pi i)"},
      {-1.0 / (2.0 * kPi * i), "-1/(2 pi i)"},       {0.5 * ip, "+1/(2 pi)"},
      {-0.5 * ip, "-1/(2 pi)"},
  };
}

CalibrationReport DbarSolver::calibrate(const std::vector<ZeroOneForm>& family, const std::vector<Complex>& probes,
                                        double h) {
  if (family.empty()) throw Error(ErrorCode::invalid_argument, "calibration needs at least one test form");
  if (probes.empty()) throw Error(ErrorCode::invalid_argument, "calibration needs probe points");

  // dbar of the solution with c0 = 1, and the target coefficient, per form and probe.
  std::vector<std::vector<Complex>> raw(family.size(), std::vector<Complex>(probes.size()));
  std::vector<std::vector<Complex>> target(family.size(), std::vector<Complex>(probes.size()));
  for (std::size_t f = 0; f < family.size(); ++f) {
    const ZeroOneForm& form = family[f];
    parallel_for(probes.size(), [&](std::size_t k) {
      const Complex z = probes[k];
      auto uw = [&](Complex p) { return apply_raw_weighted(form, p); };
      const Complex d = central_dbar(uw, z, h) + uw(z) * std::conj(weight_.gradient(z));
      const double phi = weight_.value(z);
      raw[f][k] = d * std::exp(phi);
      target[f][k] = form.weighted ? form.coeff(z) * std::exp(phi) : form.coeff(z);
    });
  }

  CalibrationReport rep;
  rep.candidates = orientation_candidates();
  for (CalibrationCandidate& cand : rep.candidates) {
    double worst = 0.0;
    for (std::size_t f = 0; f < family.size(); ++f) {
      double num = 0.0, den = 0.0;
      for (std::size_t k = 0; k < probes.size(); ++k) {
        num = std::max(num, std::abs(cand.value * raw[f][k] - target[f][k]));
        den = std::max(den, std::abs(target[f][k]));
      }
      worst = std::max(worst, den > 0.0 ? num / den : num);
    }
    cand.residual = worst;
  }
  const auto best = std::min_element(rep.candidates.begin(), rep.candidates.end(),
                                     [](const auto& a, const auto& b) { return a.residual < b.residual; });
  const auto passing = std::count_if(rep.candidates.begin(), rep.candidates.end(),
                                     [](const auto& c) { return c.residual < kCalibrationThreshold; });
  if (best->residual >= kCalibrationThreshold)
    throw Error(ErrorCode::convention, "no orientation candidate reproduces the test forms; best residual " +
                                           std::to_string(best->residual) + " for " + best->label);
  rep.c0 = best->value;
  rep.label = best->label;
  rep.residual = best->residual;
  rep.unique = passing == 1;
  c0_ = rep.c0;
  return rep;
}

std::vector<TestForm> gaussian_test_family(int count) {
  std::vector<TestForm> all;
  const Complex i(0, 1);
  all.push_back({{[](Complex x) { return Complex((1.0 - std::norm(x)) * std::exp(-std::norm(x))); }},
                 [](Complex x) { return std::conj(x) * std::exp(-std::norm(x)); },
                 "conj(xi) exp(-|xi|^2)"});
  all.push_back({{[](Complex x) { return -x * std::exp(-std::norm(x)); }},
                 [](Complex x) { return Complex(std::exp(-std::norm(x))); },
                 "exp(-|xi|^2)"});
  all.push_back({{[](Complex x) {
                   const Complex a(0.5, 0.0);
                   return std::conj(x) * std::exp(-std::norm(x - a)) * (2.0 - std::conj(x) * (x - a));
                 }},
                 [](Complex x) { return std::conj(x) * std::conj(x) * std::exp(-std::norm(x - 0.5)); },
                 "conj(xi)^2 exp(-|xi - 1/2|^2)"});
  all.push_back({{[](Complex x) { return -0.5 * x * x * std::exp(-0.5 * std::norm(x)); }},
                 [](Complex x) { return x * std::exp(-0.5 * std::norm(x)); },
                 "xi exp(-|xi|^2 / 2)"});
  all.push_back({{[i](Complex x) {
                   const Complex a = 0.5 * i;
                   return std::exp(-2.0 * std::norm(x - a)) * (1.0 - 2.0 * std::conj(x) * (x - a));
                 }},
                 [i](Complex x) { return std::conj(x) * std::exp(-2.0 * std::norm(x - 0.5 * i)); },
                 "conj(xi) exp(-2 |xi - i/2|^2)"});
  if (count < 1 || count > static_cast<int>(all.size()))
    throw Error(ErrorCode::invalid_argument, "test family size must be in 1.." + std::to_string(all.size()));
  all.resize(static_cast<std::size_t>(count));
  return all;
}

Complex apply_A(const DbarSolver& solver, const ZeroOneForm& form, Complex z) { return solver.apply(form, z); }

CalibrationReport calibrate_orientation(DbarSolver& solver, const std::vector<ZeroOneForm>& family,
                                        const std::vector<Complex>& probes) {
  return solver.calibrate(family, probes);
}

std::vector<ResidualRow> solution_residuals(const DbarSolver& solver, const ZeroOneForm& form,
                                            const std::vector<Complex>& probes, double h) {
  std::vector<ResidualRow> rows(probes.size());
  parallel_for(probes.size(), [&](std::size_t k) {
    const Complex z = probes[k];
    const Complex w = form.weighted ? form.coeff(z) * std::exp(solver.weight().value(z)) : form.coeff(z);
    rows[k] = {z, std::abs(solver.dbar_of_solution(form, z, h) - w), std::abs(w)};
  });
  return rows;
}

double verify_lp_bound(const DbarSolver& solver, const ZeroOneForm& form, double p, const PlaneRule& rule) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorCode::invalid_argument, "p must be in [1, inf)");
  const WeightModel& wt = solver.weight();
  std::vector<double> num(rule.size()), den(rule.size());
  parallel_for(rule.size(), [&](std::size_t i) {
    const Complex x = rule.nodes[i];
    const Complex w = form.weighted ? form.coeff(x) : form.coeff(x) * std::exp(-wt.value(x));
    den[i] = rule.weights[i] * std::pow(std::abs(w), p);
    num[i] = rule.weights[i] * std::pow(std::abs(solver.apply_weighted(form, x)), p);
  });
  const double d = pairwise_sum(std::span<const double>(den));
  if (d == 0.0) return 0.0;
  return std::pow(pairwise_sum(std::span<const double>(num)) / d, 1.0 / p);
}

namespace {

// Removes the basis projection from weighted samples v at the rule nodes.
Eigen::VectorXcd minus_projection(const Eigen::MatrixXcd& s, const Eigen::VectorXd& wt, const Eigen::VectorXcd& v) {
  const Eigen::VectorXcd c = s.adjoint() * (wt.asDiagonal() * v);
  return v - s * c;
}

double weighted_l2(const Eigen::VectorXd& wt, const Eigen::VectorXcd& v) {
  std::vector<double> t(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) t[static_cast<std::size_t>(i)] = wt(i) * std::norm(v(i));
  return std::sqrt(pairwise_sum(std::span<const double>(t)));
}

}  // namespace

HankelIdentityReport hankel_via_dbar(const DbarSolver& solver, const Symbol& f, const ScalarField& gw,
                                     const FockBasis& basis) {
  if (!f.has_dbar())
    throw Error(ErrorCode::capability, "symbol '" + f.name + "' has no closed-form dbar; the identity needs one");
  const PlaneRule& rule = basis.rule();
  const std::size_t n = rule.size();
  ZeroOneForm form{[gw, d = f.dbar](Complex x) { return gw(x) * d(x); }, true, DecayTag::gaussian, 0.0};

  Eigen::VectorXcd u(static_cast<Eigen::Index>(n)), fg(static_cast<Eigen::Index>(n));
  parallel_for(n, [&](std::size_t i) {
    const Complex x = rule.nodes[i];
    u(static_cast<Eigen::Index>(i)) = solver.apply_weighted(form, x);
    fg(static_cast<Eigen::Index>(i)) = f(x) * gw(x);
  });
  const Eigen::MatrixXcd s = basis.weighted_samples(rule.nodes);
  const Eigen::VectorXd wt = Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), static_cast<Eigen::Index>(n));
  const Eigen::VectorXcd lhs = minus_projection(s, wt, u);
  const Eigen::VectorXcd rhs = minus_projection(s, wt, fg);

  HankelIdentityReport rep;
  rep.via_dbar.assign(lhs.data(), lhs.data() + lhs.size());
  rep.direct.assign(rhs.data(), rhs.data() + rhs.size());
  rep.direct_norm = weighted_l2(wt, rhs);
  rep.difference_norm = weighted_l2(wt, lhs - rhs);
  rep.relative_error = rep.direct_norm > 0.0 ? rep.difference_norm / rep.direct_norm : rep.difference_norm;
  return rep;
}

}  // namespace focklab
