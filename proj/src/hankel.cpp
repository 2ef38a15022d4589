#include "focklab/hankel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "focklab/error.hpp"
#include "focklab/parallel.hpp"

namespace focklab {

namespace {

constexpr double kTailRefusal = 1e-8;
constexpr double kCertificateTolerance = 1e-6;
constexpr double kSeriesTolerance = 1e-3;

Eigen::VectorXd rule_weights(const PlaneRule& rule) {
  return Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), static_cast<Eigen::Index>(rule.size()));
}

// Upper-triangular factor of sqrt(W) M, so that factor^* factor = M^* W M.
Eigen::MatrixXcd weighted_factor(const Eigen::MatrixXcd& m, const Eigen::VectorXd& wt) {
  const Eigen::MatrixXcd scaled = wt.cwiseSqrt().asDiagonal() * m;
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(scaled);
  const Eigen::Index k = std::min(scaled.rows(), scaled.cols());
  Eigen::MatrixXcd t = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  return t;
}

std::vector<double> singular_values(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return {};
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const Eigen::VectorXd s = svd.singularValues();
  std::vector<double> out(s.data(), s.data() + s.size());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

Eigen::MatrixXcd minus_projection(const Eigen::MatrixXcd& s, const Eigen::VectorXd& wt, const Eigen::MatrixXcd& v) {
  const Eigen::MatrixXcd c = s.adjoint() * (wt.asDiagonal() * v);
  return v - s * c;
}

std::vector<Complex> sample_symbol(const Symbol& f, const std::vector<Complex>& nodes) {
  std::vector<Complex> out(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t i) {
    out[i] = f(nodes[i]);
    if (!std::isfinite(out[i].real()) || !std::isfinite(out[i].imag()))
      throw Error(ErrorCode::evaluation, "symbol '" + f.name + "' is not finite at " + format_point(nodes[i]));
  });
  return out;
}

KernelEval default_kernel(const FockBasis& B) {
  const WeightModel& w = B.weight();
  const bool closed = w.kind() == WeightKind::gaussian ||
                      (w.kind() == WeightKind::perturbed_gaussian && w.epsilon() == 0.0);
  return KernelEval(B, closed ? KernelMode::closed_form_gaussian : KernelMode::basis_sum);
}

}  // namespace

PlaneRule hankel_plane_rule(const WeightModel& w, int degree, int margin, int order) {
  return basis_plane_rule(w, degree + margin + 5, order);
}

HankelGram build_hankel_gram(const Symbol& f, const FockBasis& B, int margin) {
  if (margin < 0) throw Error(ErrorCode::invalid_argument, "projection margin must be >= 0");
  const int D = B.degree();
  const PlaneRule& rule = B.rule();
  const FockBasis proj(B.weight(), D + margin, rule);
  const Eigen::MatrixXcd s = proj.weighted_samples(rule.nodes);
  const std::vector<Complex> fv = sample_symbol(f, rule.nodes);
  const Eigen::VectorXcd fvec = Eigen::Map<const Eigen::VectorXcd>(fv.data(), static_cast<Eigen::Index>(fv.size()));
  const Eigen::MatrixXcd F = fvec.asDiagonal() * s.leftCols(D + 1);
  const Eigen::VectorXd wt = rule_weights(rule);

  // The outermost ring must carry no weight, otherwise |f|^2 outgrows the rule's Gaussian decay.
  const double r_last = std::abs(rule.nodes.back());
  double tail = 0.0, peak = 0.0;
  for (Eigen::Index i = 0; i < F.rows(); ++i) {
    const double v = F.row(i).cwiseAbs().maxCoeff() * std::sqrt(wt(i));
    peak = std::max(peak, v);
    if (std::abs(rule.nodes[static_cast<std::size_t>(i)]) >= r_last * (1 - 1e-12)) tail = std::max(tail, v);
  }
  if (tail > kTailRefusal * peak)
    throw Error(ErrorCode::refusal, "symbol '" + f.name + "' grows too fast for the plane rule's Gaussian decay");

  HankelGram g;
  g.symbol = f.name;
  g.degree = D;
  g.margin = margin;
  g.projection_degree = D + margin;
  const Eigen::MatrixXcd C = s.adjoint() * (wt.asDiagonal() * F);
  const Eigen::MatrixXcd full = F.adjoint() * (wt.asDiagonal() * F);
  g.energy = full.trace().real();
  g.G = full - C.adjoint() * C;
  g.G = 0.5 * (g.G + g.G.adjoint()).eval();
  g.factor = weighted_factor(F - s * C, wt);
  g.trace = g.G.trace().real();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(g.G, Eigen::EigenvaluesOnly);
  g.min_eigenvalue = eig.eigenvalues().size() ? eig.eigenvalues().minCoeff() : 0.0;
  return g;
}

SingularSpectrum singular_spectrum(const HankelGram& G) {
  if (G.min_eigenvalue < -1e-10 * G.energy)
    throw Error(ErrorCode::numerical_consistency,
                "Hankel Gram is not positive semidefinite: smallest eigenvalue " + std::to_string(G.min_eigenvalue) +
                    " against energy " + std::to_string(G.energy));
  SingularSpectrum s;
  s.values = singular_values(G.factor);
  s.values.resize(static_cast<std::size_t>(G.degree) + 1, 0.0);
  s.degree = G.degree;
  s.projection_degree = G.projection_degree;
  return s;
}

SingularSpectrum hankel_spectrum(const Symbol& f, const FockBasis& B, int margin) {
  SingularSpectrum s = singular_spectrum(build_hankel_gram(f, B, margin));
  const SingularSpectrum wider = singular_spectrum(build_hankel_gram(f, B, margin + 5));
  std::ostringstream q;
  q << "plane order=" << B.rule().radial_order << " angular=" << B.rule().angular_count
    << " rcut=" << B.rule().r_cut;
  s.quadrature = q.str();
  const std::size_t top = std::min<std::size_t>(10, s.values.size());
  for (std::size_t k = 0; k < top; ++k)
    s.certificate_shift = std::max(s.certificate_shift, std::abs(s.values[k] - wider.values[k]));
  s.certified = s.certificate_shift < kCertificateTolerance;
  return s;
}

TailEstimate essential_norm_tail(const SingularSpectrum& S, double lo, double hi) {
  if (!(lo >= 0.0 && lo < hi && hi <= 1.0))
    throw Error(ErrorCode::invalid_argument, "plateau window must satisfy 0 <= lo < hi <= 1");
  const std::size_t n = S.values.size();
  if (n < 4) throw Error(ErrorCode::invalid_argument, "spectrum is too short for a plateau window");
  const double D = static_cast<double>(n - 1);
  TailEstimate t;
  t.first = static_cast<std::size_t>(std::floor(lo * D));
  t.last = std::min(n - 1, static_cast<std::size_t>(std::ceil(hi * D)));
  std::vector<double> window(S.values.begin() + static_cast<std::ptrdiff_t>(t.first),
                             S.values.begin() + static_cast<std::ptrdiff_t>(t.last) + 1);
  std::vector<double> ks(window.size());
  std::iota(ks.begin(), ks.end(), static_cast<double>(t.first));
  t.slope = trend_slope(ks, window);
  std::vector<double> sorted = window;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size();
  t.estimate = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
  t.reliable = std::abs(t.slope) * static_cast<double>(t.last - t.first) <= 0.1 * t.estimate + 1e-6;
  return t;
}

SchattenGauge SchattenGauge::power(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw Error(ErrorCode::invalid_argument, "power gauge needs p > 0");
  SchattenGauge g;
  g.family_ = GaugeFamily::power;
  g.p_ = p;
  g.validate();
  return g;
}

SchattenGauge SchattenGauge::exp_minus_one() {
  SchattenGauge g;
  g.family_ = GaugeFamily::exp_minus_one;
  g.validate();
  return g;
}

SchattenGauge SchattenGauge::custom_grid(std::vector<double> ts, std::vector<double> hs) {
  if (ts.size() < 2 || ts.size() != hs.size())
    throw Error(ErrorCode::invalid_argument, "custom gauge needs matching grids with at least two points");
  for (std::size_t i = 1; i < ts.size(); ++i)
    if (!(ts[i] > ts[i - 1])) throw Error(ErrorCode::invalid_argument, "custom gauge grid must be increasing");
  if (ts.front() != 0.0) throw Error(ErrorCode::invalid_argument, "custom gauge grid must start at t = 0");
  SchattenGauge g;
  g.family_ = GaugeFamily::custom_grid;
  g.ts_ = std::move(ts);
  g.hs_ = std::move(hs);
  g.validate();
  return g;
}

double SchattenGauge::operator()(double t) const {
  if (t < 0.0) throw Error(ErrorCode::invalid_argument, "gauge argument must be nonnegative");
  switch (family_) {
    case GaugeFamily::power: return std::pow(t, p_);
    case GaugeFamily::exp_minus_one: return std::expm1(t);
    case GaugeFamily::custom_grid: {
      auto it = std::upper_bound(ts_.begin(), ts_.end(), t);
      std::size_t i = static_cast<std::size_t>(it - ts_.begin());
      i = std::clamp<std::size_t>(i, 1, ts_.size() - 1);
      const double a = (t - ts_[i - 1]) / (ts_[i] - ts_[i - 1]);
      return hs_[i - 1] + a * (hs_[i] - hs_[i - 1]);
    }
  }
  return 0.0;
}

std::string SchattenGauge::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (family_) {
    case GaugeFamily::power: os << "power-p(p=" << p_ << ")"; break;
    case GaugeFamily::exp_minus_one: os << "exp-minus-one"; break;
    case GaugeFamily::custom_grid: os << "custom-grid(" << ts_.size() << " points)"; break;
  }
  return os.str();
}

void SchattenGauge::validate() {
  if (std::abs((*this)(0.0)) > 1e-15) throw Error(ErrorCode::invalid_argument, "gauge must satisfy h(0) = 0");
  const int n = 400;
  const double top = family_ == GaugeFamily::custom_grid ? ts_.back() : 16.0;
  double prev = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double v = (*this)(top * i / n);
    if (v < prev) throw Error(ErrorCode::invalid_argument, "gauge must be increasing");
    prev = v;
  }
  // Midpoint convexity of u -> h(sqrt(u)) on a grid of u = t^2.
  sqrt_convex_ = true;
  const double umax = top * top;
  for (int i = 1; i < n; ++i) {
    const double a = umax * (i - 1) / n, b = umax * (i + 1) / n, m = umax * i / n;
    const double lhs = (*this)(std::sqrt(m));
    const double rhs = 0.5 * ((*this)(std::sqrt(a)) + (*this)(std::sqrt(b)));
    if (lhs > rhs + 1e-10 * std::max(1.0, std::abs(rhs))) {
      sqrt_convex_ = false;
      break;
    }
  }
}

SeriesReport series_report(const std::vector<double>& terms) {
  SeriesReport r;
  r.partial_sums.resize(terms.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    acc += terms[i];
    r.partial_sums[i] = acc;
  }
  r.total = acc;
  const std::size_t cut = (3 * terms.size()) / 4;
  const double before = cut ? r.partial_sums[cut - 1] : 0.0;
  r.tail_ratio = r.total > 0.0 ? (r.total - before) / r.total : 0.0;
  r.convergent = r.total == 0.0 || r.tail_ratio < kSeriesTolerance;
  return r;
}

SeriesReport schatten_sum(const SingularSpectrum& S, const SchattenGauge& h, double c) {
  if (!(c > 0.0)) throw Error(ErrorCode::invalid_argument, "Schatten scale c must be > 0");
  std::vector<double> terms(S.values.size());
  for (std::size_t k = 0; k < terms.size(); ++k) terms[k] = h(c * S.values[k]);
  return series_report(terms);
}

namespace {

double kernel_hankel_norm(const Symbol& f, Complex z, double q, const FockBasis& B, const KernelEval& K,
                          const Eigen::MatrixXcd& s, const Eigen::VectorXd& wt) {
  const PlaneRule& rule = B.rule();
  const double diag = K.weighted(z, z).real();
  if (!(diag > 0.0)) throw Error(ErrorCode::degree_cap, "K(z,z) is not positive at " + format_point(z));
  const double scale = 1.0 / std::sqrt(diag);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(rule.size()));
  for (std::size_t i = 0; i < rule.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = f(rule.nodes[i]) * K.weighted(rule.nodes[i], z) * scale;
  const Eigen::VectorXcd res = minus_projection(s, wt, v);
  std::vector<double> terms(rule.size());
  for (std::size_t i = 0; i < terms.size(); ++i)
    terms[i] = wt(static_cast<Eigen::Index>(i)) * std::pow(std::abs(res(static_cast<Eigen::Index>(i))), q);
  return std::pow(pairwise_sum(std::span<const double>(terms)), 1.0 / q);
}

}  // namespace

double hankel_on_kernel(const Symbol& f, Complex z, double q, const FockBasis& B) {
  if (!(q >= 1.0)) throw Error(ErrorCode::invalid_argument, "q must be >= 1");
  const KernelEval K = default_kernel(B);
  return kernel_hankel_norm(f, z, q, B, K, B.weighted_samples(B.rule().nodes), rule_weights(B.rule()));
}

RadialProfile kernel_profile(const Symbol& f, double q, const FockBasis& B, const std::vector<double>& shells,
                             int angles) {
  if (shells.empty()) throw Error(ErrorCode::invalid_argument, "profile needs at least one shell");
  for (std::size_t i = 1; i < shells.size(); ++i)
    if (!(shells[i] > shells[i - 1])) throw Error(ErrorCode::invalid_argument, "profile shells must be increasing");
  if (angles < 1) throw Error(ErrorCode::invalid_argument, "profile needs at least one angle per shell");
  if (!(q >= 1.0)) throw Error(ErrorCode::invalid_argument, "q must be >= 1");
  const KernelEval K = default_kernel(B);
  const Eigen::MatrixXcd s = B.weighted_samples(B.rule().nodes);
  const Eigen::VectorXd wt = rule_weights(B.rule());

  RadialProfile p;
  p.functional = Functional::HK;
  p.q = q;
  p.d = B.degree();
  p.shells = shells;
  for (double rho : shells)
    for (int k = 0; k < angles; ++k) {
      p.points.push_back(std::polar(rho, 2.0 * kPi * k / angles));
      p.shell_of_point.push_back(rho);
    }
  p.values.resize(p.points.size());
  parallel_for(p.points.size(), [&](std::size_t i) { p.values[i] = kernel_hankel_norm(f, p.points[i], q, B, K, s, wt); });
  p.shell_max.assign(shells.size(), 0.0);
  for (std::size_t i = 0; i < p.points.size(); ++i) {
    const std::size_t sh = i / static_cast<std::size_t>(angles);
    p.shell_max[sh] = std::max(p.shell_max[sh], p.values[i]);
  }
  p.final_value = p.shell_max.back();
  p.trend_slope = trend_slope(p.shells, p.shell_max);
  return p;
}

SmoothCutoff::SmoothCutoff(double t) : t_(t) {
  if (!(t > 0.0)) throw Error(ErrorCode::invalid_argument, "cutoff radius t must be > 0");
}

double SmoothCutoff::operator()(Complex z) const {
  const double u = std::abs(z) - t_;
  if (u <= 0.0) return 1.0;
  if (u >= 1.0) return 0.0;
  return 1.0 - 3.0 * u * u + 2.0 * u * u * u;
}

Complex SmoothCutoff::dbar(Complex z) const {
  const double rho = std::abs(z);
  const double u = rho - t_;
  if (u <= 0.0 || u >= 1.0) return {};
  const double ds = -6.0 * u + 6.0 * u * u;
  return ds * z / (2.0 * rho);
}

double SmoothCutoff::gradient_norm(Complex z) const { return 2.0 * std::abs(dbar(z)); }

double SmoothCutoff::max_gradient_on_grid(int radial, int angular) const {
  double m = 0.0;
  for (int i = 0; i <= radial; ++i) {
    const double rho = t_ - 0.5 + 2.0 * i / radial;
    for (int k = 0; k < angular; ++k) m = std::max(m, gradient_norm(std::polar(rho, 2.0 * kPi * k / angular)));
  }
  return m;
}

SmoothCutoff smooth_cutoff(double t) { return SmoothCutoff(t); }

CompactApproximation compact_approximant(const Decomposition& D, double t, const DbarSolver& solver,
                                         const FockBasis& B, int margin) {
  if (!solver.calibrated()) throw Error(ErrorCode::uncalibrated, "compact approximant needs a calibrated dbar solver");
  const SmoothCutoff sigma(t);
  const Window inside = D.partition().interior();
  if (!inside.contains(Complex(t + 1.0, t + 1.0)) || !inside.contains(Complex(-t - 1.0, -t - 1.0)))
    throw Error(ErrorCode::window, "cutoff support |z| <= t + 1 leaves the decomposition window");

  const int deg = B.degree();
  const PlaneRule& rule = B.rule();
  const FockBasis proj(B.weight(), deg + margin, rule);
  const Eigen::MatrixXcd s = proj.weighted_samples(rule.nodes);
  const Eigen::VectorXd wt = rule_weights(rule);
  const ZeroOneForm form{[sigma, D](Complex x) {
                           const double c = sigma(x);
                           return c == 0.0 ? Complex{} : c * D.dbar_f1(x);
                         },
                         false, DecayTag::compact, t + 1.0};
  const FockBasis low(B.weight(), deg, rule);
  const double reach = t + 1.0 + solver.reach();

  Eigen::MatrixXcd delta(static_cast<Eigen::Index>(rule.size()), deg + 1);
  parallel_for(rule.size(), [&](std::size_t i) {
    const Complex z = rule.nodes[i];
    const double c = sigma(z);
    const Complex keep = c == 0.0 ? D.source()(z) : D.source()(z) - c * D.f2(z);
    const Eigen::Index row = static_cast<Eigen::Index>(i);
    for (int j = 0; j <= deg; ++j) delta(row, j) = keep * s(row, j);
    if (std::abs(z) <= reach) delta.row(row) -= solver.apply_moments_weighted(form, low, z).transpose();
  });

  CompactApproximation out;
  out.t = t;
  out.difference_spectrum = singular_values(weighted_factor(minus_projection(s, wt, delta), wt));
  out.gap = out.difference_spectrum.empty() ? 0.0 : out.difference_spectrum.front();

  Symbol h;
  h.name = D.source().name + ":h_t";
  h.f = [solver, form, sigma, D](Complex z) {
    const double c = sigma(z);
    const Complex psi = solver.apply(form, z);
    return c == 0.0 ? psi : psi + c * D.f2(z);
  };
  h.smoothness = Smoothness::c1;
  h.support = SupportHint::entire_plane;
  out.h_t = std::move(h);
  return out;
}

MeasureModel MeasureModel::lebesgue() { return {}; }

MeasureModel MeasureModel::with_density(std::function<double(Complex)> g) {
  MeasureModel m;
  m.kind = Kind::density;
  m.density = std::move(g);
  return m;
}

MeasureModel MeasureModel::atomic(std::vector<Complex> points, std::vector<double> masses) {
  if (points.size() != masses.size()) throw Error(ErrorCode::invalid_argument, "atoms and masses differ in length");
  for (double m : masses)
    if (!(m > 0.0)) throw Error(ErrorCode::invalid_argument, "atomic masses must be positive");
  MeasureModel m;
  m.kind = Kind::atomic;
  m.atoms = std::move(points);
  m.masses = std::move(masses);
  return m;
}

double berezin_transform(const MeasureModel& mu, const KernelEval& K, Complex z, const PlaneRule& rule) {
  const double diag = K.weighted(z, z).real();
  if (!(diag > 0.0)) throw Error(ErrorCode::degree_cap, "K(z,z) is not positive at " + format_point(z));
  if (mu.kind == MeasureModel::Kind::atomic) {
    double acc = 0.0;
    for (std::size_t i = 0; i < mu.atoms.size(); ++i) acc += mu.masses[i] * std::norm(K.weighted(mu.atoms[i], z)) / diag;
    return acc;
  }
  return integrate(rule, [&](Complex w) {
    const double g = mu.kind == MeasureModel::Kind::density ? mu.density(w) : 1.0;
    return g == 0.0 ? 0.0 : g * std::norm(K.weighted(w, z)) / diag;
  });
}

double measure_average(const MeasureModel& mu, Complex z, double r, int order) {
  if (!(r > 0.0)) throw Error(ErrorCode::invalid_argument, "ball radius must be > 0");
  const double area = kPi * r * r;
  switch (mu.kind) {
    case MeasureModel::Kind::lebesgue: return 1.0;
    case MeasureModel::Kind::atomic: {
      double acc = 0.0;
      for (std::size_t i = 0; i < mu.atoms.size(); ++i)
        if (std::abs(mu.atoms[i] - z) < r) acc += mu.masses[i];
      return acc / area;
    }
    case MeasureModel::Kind::density:
      return integrate(ball_rule(z, r, order), [&](Complex w) { return mu.density(w); }) / area;
  }
  return 0.0;
}

std::vector<CriterionRow> schatten_h_criterion(const Symbol& f, const SchattenGauge& h, double r, int d,
                                               const Lattice& L, const SingularSpectrum& S,
                                               const std::vector<double>& c_grid, double zero_floor) {
  const IdaNormResult g = ida_norm(f, kInfinity, 2.0, r, L, d);
  std::vector<std::size_t> order(L.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::abs(L.point(a)) < std::abs(L.point(b)); });
  auto clean = [zero_floor](double v) { return v <= zero_floor ? 0.0 : v; };
  SingularSpectrum cleaned = S;
  for (double& v : cleaned.values) v = clean(v);
  std::vector<CriterionRow> rows;
  for (double c : c_grid) {
    if (!(c > 0.0)) throw Error(ErrorCode::invalid_argument, "c-grid values must be > 0");
    std::vector<double> terms(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) terms[k] = h(c * clean(g.samples[order[k]])) * L.cell_area();
    rows.push_back({c, series_report(terms), schatten_sum(cleaned, h, c)});
  }
  return rows;
}

}  // namespace focklab
