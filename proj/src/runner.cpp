#include "focklab/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "focklab/csv.hpp"
#include "focklab/dbar.hpp"
#include "focklab/decomposition.hpp"
#include "focklab/error.hpp"
#include "focklab/fock.hpp"
#include "focklab/hankel.hpp"
#include "focklab/lattice.hpp"
#include "focklab/oscillation.hpp"
#include "focklab/symbols.hpp"
#include "focklab/weight.hpp"

namespace focklab {

namespace fs = std::filesystem;

namespace {

const std::vector<std::pair<std::string, std::string>>& versions() {
  static const std::vector<std::pair<std::string, std::string>> v = {
      {"weight", "1.0.0"},        {"quadrature", "1.0.0"},    {"fock_core", "1.0.0"},
      {"lattice", "1.0.0"},       {"oscillation", "1.0.0"},   {"decomposition", "1.0.0"},
      {"dbar_solver", "1.0.0"},   {"hankel_spectral", "1.0.0"}, {"symbols", "1.0.0"},
      {"cli_runner", "1.0.0"}};
  return v;
}

class Context {
 public:
  Context(const ExperimentConfig& cfg, std::string sub) : cfg(cfg) {
    manifest.subcommand = std::move(sub);
    Config c = cfg.to_config();
    manifest.config_text = c.serialize();
    manifest.config_hash = config_hash(cfg);
    manifest.module_versions = versions();
    manifest.directory = (fs::path(cfg.out) / manifest.subcommand / manifest.config_hash.substr(0, 16)).string();
    std::error_code ec;
    fs::create_directories(manifest.directory, ec);
    if (ec) throw Error(ErrorCode::io, "cannot create " + manifest.directory + ": " + ec.message());
  }

  void emit(const std::string& name, const CsvTable& t) { emit_text(name, t.render()); }

  void emit_text(const std::string& name, const std::string& text) {
    write_atomic((fs::path(manifest.directory) / name).string(), text);
    manifest.files.push_back({name, sha256_hex(text), text.size()});
  }

  template <class F>
  auto timed(const std::string& label, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      manifest.wall_times.emplace_back(label, seconds_since(t0));
    } else {
      auto out = f();
      manifest.wall_times.emplace_back(label, seconds_since(t0));
      return out;
    }
  }

  const ExperimentConfig& cfg;
  RunManifest manifest;

 private:
  static double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

std::string point_label(Complex z) { return format_cell(z.real()) + " " + format_cell(z.imag()); }

WeightModel make_weight(const ExperimentConfig& c) {
  if (c.weight.kind == "gaussian") return WeightModel::gaussian(c.weight.alpha);
  return WeightModel::perturbed_gaussian(c.weight.alpha, c.weight.epsilon);
}

std::vector<Symbol> make_symbols(const ExperimentConfig& c) {
  SymbolParams p;
  for (std::size_t i = 0; i < c.symbol.coeffs_re.size(); ++i)
    p.coeffs.emplace_back(c.symbol.coeffs_re[i], c.symbol.coeffs_im[i]);
  p.beta = c.symbol.beta;
  p.radius = c.symbol.radius;
  p.amplitude = c.symbol.amplitude;
  std::vector<Symbol> out;
  for (const auto& id : c.symbol.families) out.push_back(make_symbol(id, p));
  return out;
}

Window make_window(const ExperimentConfig& c) {
  const auto& w = c.lattice.window;
  return {w[0], w[1], w[2], w[3]};
}

Lattice make_lattice(const ExperimentConfig& c) {
  return Lattice(Complex(c.lattice.base_re, c.lattice.base_im), c.lattice.r, make_window(c));
}

FockBasis spectral_basis(const ExperimentConfig& c, int degree, int margin) {
  const WeightModel w = make_weight(c);
  return FockBasis(w, degree, hankel_plane_rule(w, degree, margin, c.basis.radial_order));
}

FockBasis plain_basis(const ExperimentConfig& c, int degree) {
  const WeightModel w = make_weight(c);
  return FockBasis(w, degree, basis_plane_rule(w, degree, c.basis.radial_order, c.basis.angular));
}

// Gaussian weights get the degree raised until the basis-sum kernel agrees with
// the closed form to 1e-8 on |z|, |w| <= 2.
FockBasis certified_basis(const ExperimentConfig& c) {
  const WeightModel w = make_weight(c);
  if (w.kind() != WeightKind::gaussian) return plain_basis(c, c.basis.degree);
  const int cap = 200;
  const PlaneRule rule = basis_plane_rule(w, cap, c.basis.radial_order, c.basis.angular);
  const FockBasis B = build_certified_basis(w, c.basis.degree, rule, 2.0, 1e-8, 10, cap);
  return plain_basis(c, B.degree());
}

DbarRule make_dbar_rule(const ExperimentConfig& c) {
  DbarRule r;
  r.inner_order = c.dbar.inner_order;
  r.outer_order = c.dbar.outer_order;
  r.angular = c.dbar.angular;
  r.inner_radius = c.dbar.inner_radius;
  r.outer_radius = c.dbar.outer_radius;
  return r;
}

std::vector<Complex> dbar_probes() {
  std::vector<Complex> p;
  for (double x : {-1.5, -0.5, 0.5, 1.5})
    for (double y : {-1.0, 0.25, 1.0}) p.emplace_back(x, y);
  return p;
}

CalibrationReport calibrated_solver(Context& ctx, DbarSolver& solver) {
  std::vector<ZeroOneForm> forms;
  for (const auto& t : gaussian_test_family(ctx.cfg.dbar.test_forms)) forms.push_back(t.form);
  CalibrationReport rep = ctx.timed("calibration", [&] { return calibrate_orientation(solver, forms, dbar_probes()); });
  ctx.manifest.calibration.emplace_back("c0", point_label(rep.c0));
  ctx.manifest.calibration.emplace_back("c0_label", rep.label);
  return rep;
}

std::vector<SchattenGauge> make_gauges(const ExperimentConfig& c) {
  std::vector<SchattenGauge> out;
  for (const auto& g : c.gauge.families) {
    if (g == "power")
      for (double p : c.gauge.powers) out.push_back(SchattenGauge::power(p));
    else if (g == "exp-minus-one")
      out.push_back(SchattenGauge::exp_minus_one());
    else
      out.push_back(SchattenGauge::custom_grid(c.gauge.ts, c.gauge.hs));
  }
  return out;
}

CsvTable summary_table() { return CsvTable({"key", "value"}); }

// Profile rows in (symbol, shell, quantity, value) form plus per-point samples.
void emit_profiles(Context& ctx, const std::vector<std::pair<std::string, RadialProfile>>& profiles) {
  CsvTable points({"symbol", "x", "y", "shell", "value", "functional", "r", "q", "d"});
  CsvTable shells({"symbol", "shell", "quantity", "value"});
  CsvTable summary({"symbol", "final_value", "trend_slope"});
  for (const auto& [name, p] : profiles) {
    for (std::size_t i = 0; i < p.points.size(); ++i)
      points.add({name, p.points[i].real(), p.points[i].imag(), p.shell_of_point[i], p.values[i],
                  std::string(to_string(p.functional)), p.r, p.q, static_cast<long long>(p.d)});
    for (std::size_t s = 0; s < p.shells.size(); ++s)
      shells.add({name, p.shells[s], std::string(to_string(p.functional)) + "-shell-max", p.shell_max[s]});
    summary.add({name, p.final_value, p.trend_slope});
  }
  ctx.emit("profile_points.csv", points);
  ctx.emit("profile_shells.csv", shells);
  ctx.emit("summary.csv", summary);
}

void cmd_certify_weight(Context& ctx) {
  const WeightModel w = make_weight(ctx.cfg);
  const Window win = make_window(ctx.cfg);
  std::vector<Complex> probes;
  for (int i = 0; i <= 10; ++i)
    for (int j = 0; j <= 10; ++j)
      probes.emplace_back(win.x_min + (win.x_max - win.x_min) * i / 10.0, win.y_min + (win.y_max - win.y_min) * j / 10.0);
  std::mt19937_64 rng(ctx.cfg.seed);
  std::uniform_real_distribution<double> ux(win.x_min, win.x_max), uy(win.y_min, win.y_max);
  for (int k = 0; k < 32; ++k) {
    const double x = ux(rng);
    probes.emplace_back(x, uy(rng));
  }
  const CertificationReport rep = ctx.timed("certify", [&] { return certify_weight(w, probes, 1e-9); });
  CsvTable t({"x", "y", "lambda_min", "lambda_max", "fd_error"});
  for (const auto& p : rep.probes)
    t.add({p.point.real(), p.point.imag(), p.min_eigenvalue, p.max_eigenvalue, finite_difference_check(w, p.point, 1e-4)});
  ctx.emit("probes.csv", t);
  CsvTable s = summary_table();
  s.add({std::string("m"), w.m()});
  s.add({std::string("M"), w.M()});
  s.add({std::string("min_eigenvalue"), rep.min_eigenvalue});
  s.add({std::string("max_eigenvalue"), rep.max_eigenvalue});
  s.add({std::string("worst_violation"), rep.worst_violation});
  s.add({std::string("pass"), static_cast<long long>(rep.pass)});
  ctx.emit("summary.csv", s);
}

void cmd_build_basis(Context& ctx) {
  const FockBasis B = ctx.timed("basis", [&] { return certified_basis(ctx.cfg); });
  const WeightModel& w = B.weight();
  const bool gaussian = w.kind() == WeightKind::gaussian;
  CsvTable t({"k", "log_c_k", "c_k_sq", "reference_rel_error"});
  for (int k = 0; k <= B.degree(); ++k) {
    double rel = 0.0;
    if (gaussian) {
      const double ref = std::log(kPi) + std::lgamma(k + 1.0) - (k + 1.0) * std::log(w.alpha());
      rel = std::abs(std::expm1(2.0 * B.log_norm(k) - ref));
    }
    t.add({static_cast<long long>(k), B.log_norm(k), B.norm_sq(k), rel});
  }
  ctx.emit("norms.csv", t);
  const PlaneRule& rule = B.rule();
  const Eigen::MatrixXcd S = B.weighted_samples(rule.nodes);
  const Eigen::VectorXd wt = Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), static_cast<Eigen::Index>(rule.size()));
  const Eigen::MatrixXcd gram = S.adjoint() * (wt.asDiagonal() * S);
  const double gram_error = (gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  CsvTable s = summary_table();
  s.add({std::string("degree"), static_cast<long long>(B.degree())});
  s.add({std::string("nodes"), static_cast<long long>(rule.size())});
  s.add({std::string("r_cut"), rule.r_cut});
  s.add({std::string("radial_order"), static_cast<long long>(rule.radial_order)});
  s.add({std::string("angular_count"), static_cast<long long>(rule.angular_count)});
  s.add({std::string("gram_error"), gram_error});
  if (gaussian) s.add({std::string("truncation_error_box2"), truncation_error(B, 2.0)});
  ctx.emit("summary.csv", s);
}

void cmd_kernel_fit(Context& ctx) {
  const FockBasis B = certified_basis(ctx.cfg);
  const KernelEval K(B, KernelMode::basis_sum);
  std::mt19937_64 rng(ctx.cfg.seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<ProbePair> pairs;
  for (int k = 0; k < 64; ++k) {
    const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    pairs.push_back({Complex(a, b), Complex(c, d)});
  }
  for (int k = 0; k < 8; ++k) pairs.push_back({Complex(0.25 * k - 1.0, 0.1), Complex(0.25 * k - 1.0, 0.1)});
  const KernelEstimates e = ctx.timed("fit", [&] { return fit_kernel_estimates(K, pairs, 1.0); });
  CsvTable t({"zx", "zy", "wx", "wy", "distance", "weighted_abs_kernel", "residual"});
  for (std::size_t i = 0; i < pairs.size(); ++i)
    t.add({pairs[i].z.real(), pairs[i].z.imag(), pairs[i].w.real(), pairs[i].w.imag(), std::abs(pairs[i].z - pairs[i].w),
           std::abs(K.weighted(pairs[i].z, pairs[i].w)), e.residuals[i]});
  ctx.emit("pairs.csv", t);
  CsvTable s = summary_table();
  s.add({std::string("theta"), e.theta});
  s.add({std::string("c1"), e.c1});
  s.add({std::string("c1_fit"), e.c1_fit});
  s.add({std::string("c2"), e.c2});
  s.add({std::string("r0"), e.r0});
  s.add({std::string("rms_residual"), e.rms_residual});
  s.add({std::string("valid"), static_cast<long long>(e.valid)});
  ctx.emit("summary.csv", s);
}

void cmd_lattice(Context& ctx) {
  const Lattice L = ctx.timed("lattice", [&] { return make_lattice(ctx.cfg); });
  const int K = ctx.cfg.lattice.modulus;
  CsvTable t({"index", "m", "s", "x", "y", "sublattice"});
  for (std::size_t i = 0; i < L.size(); ++i) {
    const auto [m, s] = L.coords(i);
    t.add({static_cast<long long>(i), static_cast<long long>(m), static_cast<long long>(s), L.point(i).real(),
           L.point(i).imag(), static_cast<long long>(L.sublattice_id(i, K))});
  }
  ctx.emit("points.csv", t);
  CsvTable s = summary_table();
  s.add({std::string("count"), static_cast<long long>(L.size())});
  s.add({std::string("step"), L.step()});
  s.add({std::string("sublattices"), static_cast<long long>(split_sublattices(L, K).size())});
  ctx.emit("summary.csv", s);
}

void cmd_profile(Context& ctx, Functional which) {
  const auto& fc = ctx.cfg.functional;
  std::vector<std::pair<std::string, RadialProfile>> profiles;
  for (const auto& f : make_symbols(ctx.cfg))
    profiles.emplace_back(f.name, ctx.timed(f.name, [&] {
      return radial_profile(f, which, fc.q, fc.r, fc.d, fc.shells, fc.angles, fc.ball_order);
    }));
  emit_profiles(ctx, profiles);
}

void cmd_ida_norm(Context& ctx) {
  const auto& fc = ctx.cfg.functional;
  const Lattice L = make_lattice(ctx.cfg);
  CsvTable t({"symbol", "s", "value", "boundary_fraction", "window_warning"});
  CsvTable samples({"symbol", "x", "y", "g"});
  for (const auto& f : make_symbols(ctx.cfg)) {
    const IdaNormResult r = ctx.timed(f.name, [&] { return ida_norm(f, fc.s, fc.q, fc.r, L, fc.d, fc.ball_order); });
    t.add({f.name, r.s, r.value, r.boundary_fraction, static_cast<long long>(r.window_warning)});
    for (std::size_t i = 0; i < L.size(); ++i) samples.add({f.name, L.point(i).real(), L.point(i).imag(), r.samples[i]});
  }
  ctx.emit("ida_norm.csv", t);
  ctx.emit("samples.csv", samples);
}

void cmd_decompose(Context& ctx) {
  const auto& fc = ctx.cfg.functional;
  const Lattice L = make_lattice(ctx.cfg);
  const PartitionOfUnity P(L, ctx.cfg.lattice.support_factor);
  const Window probe_box = P.interior().shrunk(fc.r);
  if (!(probe_box.x_min < probe_box.x_max && probe_box.y_min < probe_box.y_max))
    throw Error(ErrorCode::window, "lattice.window leaves no room for probes after the partition and ball margins");
  std::vector<Complex> probes;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      probes.emplace_back(probe_box.x_min + (probe_box.x_max - probe_box.x_min) * (i + 0.5) / 5.0,
                          probe_box.y_min + (probe_box.y_max - probe_box.y_min) * (j + 0.5) / 5.0);
  CsvTable rows({"symbol", "x", "y", "sum_error", "dbar_f1", "m_f2", "g", "g_footprint", "ratio_dbar", "ratio_m"});
  CsvTable summary({"symbol", "footprint_radius", "sup_dbar_f1", "sup_m_f2", "max_ratio_dbar", "max_ratio_m", "unbounded"});
  for (const auto& f : make_symbols(ctx.cfg)) {
    const ControlReport rep = ctx.timed(f.name, [&] {
      const Decomposition D(f, P, fc.q, fc.d, fc.ball_order);
      return verify_controls(D, probes, fc.r, fc.q, fc.d, fc.ball_order);
    });
    for (const auto& r : rep.rows)
      rows.add({f.name, r.z.real(), r.z.imag(), std::abs(r.f1 + r.f2 - r.f), std::abs(r.dbar_f1), r.m_f2, r.g,
                r.g_footprint, r.ratio_dbar, r.ratio_m});
    summary.add({f.name, rep.footprint_radius, rep.sup_dbar_f1, rep.sup_m_f2, rep.max_ratio_dbar, rep.max_ratio_m,
                 static_cast<long long>(rep.unbounded)});
  }
  ctx.emit("controls.csv", rows);
  ctx.emit("summary.csv", summary);
}

void cmd_dbar_check(Context& ctx) {
  DbarSolver solver(make_weight(ctx.cfg), make_dbar_rule(ctx.cfg));
  const CalibrationReport cal = calibrated_solver(ctx, solver);
  CsvTable cands({"label", "c0_re", "c0_im", "residual"});
  for (const auto& c : cal.candidates) cands.add({c.label, c.value.real(), c.value.imag(), c.residual});
  ctx.emit("calibration.csv", cands);

  CsvTable res({"form", "x", "y", "residual", "magnitude"});
  CsvTable worst({"form", "max_residual", "max_magnitude", "relative"});
  for (const auto& tf : gaussian_test_family(ctx.cfg.dbar.test_forms)) {
    const auto rows = ctx.timed(tf.name, [&] { return solution_residuals(solver, tf.form, dbar_probes(), ctx.cfg.dbar.fd_step); });
    double mr = 0.0, mm = 0.0;
    for (const auto& r : rows) {
      res.add({tf.name, r.z.real(), r.z.imag(), r.residual, r.magnitude});
      mr = std::max(mr, r.residual);
      mm = std::max(mm, r.magnitude);
    }
    worst.add({tf.name, mr, mm, mm > 0 ? mr / mm : 0.0});
  }
  ctx.emit("residuals.csv", res);
  ctx.emit("residual_summary.csv", worst);

  const FockBasis B = plain_basis(ctx.cfg, ctx.cfg.basis.degree);
  const WeightModel w = make_weight(ctx.cfg);
  const KernelEval K(B, KernelMode::basis_sum);
  CsvTable ident({"symbol", "kernel_point", "direct_norm", "difference_norm", "relative_error"});
  long long skipped = 0;
  for (const auto& f : make_symbols(ctx.cfg)) {
    if (!f.has_dbar()) {
      ++skipped;
      continue;
    }
    for (Complex a : {Complex(0.0, 0.0), Complex(0.5, -0.25)}) {
      const ScalarField gw = weighted_normalized_kernel(K, a);
      const auto rep = ctx.timed(f.name + "-identity", [&] { return hankel_via_dbar(solver, f, gw, B); });
      ident.add({f.name, point_label(a), rep.direct_norm, rep.difference_norm, rep.relative_error});
    }
  }
  ctx.emit("hankel_identity.csv", ident);
  CsvTable s = summary_table();
  s.add({std::string("c0_re"), cal.c0.real()});
  s.add({std::string("c0_im"), cal.c0.imag()});
  s.add({std::string("c0_label"), cal.label});
  s.add({std::string("calibration_residual"), cal.residual});
  s.add({std::string("unique"), static_cast<long long>(cal.unique)});
  s.add({std::string("identity_skipped_without_dbar"), skipped});
  ctx.emit("summary.csv", s);
}

void cmd_hankel_svd(Context& ctx) {
  const FockBasis B = spectral_basis(ctx.cfg, ctx.cfg.basis.degree, ctx.cfg.basis.margin);
  CsvTable spectrum_rows({"symbol", "k", "s_k"});
  CsvTable cert({"symbol", "degree", "projection_degree", "certificate_shift", "certified", "quadrature"});
  for (const auto& f : make_symbols(ctx.cfg)) {
    const SingularSpectrum S = ctx.timed(f.name, [&] { return hankel_spectrum(f, B, ctx.cfg.basis.margin); });
    for (std::size_t k = 0; k < S.values.size(); ++k) spectrum_rows.add({f.name, static_cast<long long>(k + 1), S.values[k]});
    cert.add({f.name, static_cast<long long>(S.degree), static_cast<long long>(S.projection_degree), S.certificate_shift,
              static_cast<long long>(S.certified), S.quadrature});
  }
  ctx.emit("spectrum.csv", spectrum_rows);
  ctx.emit("certificate.csv", cert);
}

void cmd_kz_profile(Context& ctx) {
  const auto& fc = ctx.cfg.functional;
  const FockBasis B = ctx.timed("basis", [&] { return plain_basis(ctx.cfg, fc.kernel_degree); });
  std::vector<std::pair<std::string, RadialProfile>> profiles;
  for (const auto& f : make_symbols(ctx.cfg))
    profiles.emplace_back(f.name, ctx.timed(f.name, [&] { return kernel_profile(f, fc.q, B, fc.shells, fc.angles); }));
  emit_profiles(ctx, profiles);
}

void cmd_essential_norm(Context& ctx) {
  const FockBasis B = spectral_basis(ctx.cfg, ctx.cfg.basis.degree, ctx.cfg.basis.margin);
  CsvTable t({"symbol", "estimate", "slope", "first", "last", "reliable", "certified"});
  for (const auto& f : make_symbols(ctx.cfg)) {
    const SingularSpectrum S = ctx.timed(f.name, [&] { return hankel_spectrum(f, B, ctx.cfg.basis.margin); });
    const TailEstimate e = essential_norm_tail(S);
    t.add({f.name, e.estimate, e.slope, static_cast<long long>(e.first), static_cast<long long>(e.last),
           static_cast<long long>(e.reliable), static_cast<long long>(S.certified)});
  }
  ctx.emit("essential_norm.csv", t);
}

// Lattice on a square large enough that the partition interior covers |z| <= reach.
Lattice covering_lattice(double r_lattice, double reach, double support_factor) {
  const double half = reach + support_factor * r_lattice + r_lattice;
  return Lattice(Complex{}, r_lattice, Window::square(half));
}

struct GapRow {
  std::string symbol;
  double t = 0.0, gap = 0.0, ess = 0.0;
};

std::vector<GapRow> gap_rows(Context& ctx, CsvTable* spectra) {
  const auto& ac = ctx.cfg.approx;
  const auto& fc = ctx.cfg.functional;
  DbarSolver solver(make_weight(ctx.cfg), make_dbar_rule(ctx.cfg));
  calibrated_solver(ctx, solver);
  const FockBasis B = spectral_basis(ctx.cfg, ctx.cfg.basis.degree, ac.margin);
  const double tmax = *std::max_element(ac.t.begin(), ac.t.end());
  const PartitionOfUnity P(covering_lattice(ac.lattice_r, tmax + 1.5, ctx.cfg.lattice.support_factor),
                           ctx.cfg.lattice.support_factor);
  std::vector<GapRow> rows;
  for (const auto& f : make_symbols(ctx.cfg)) {
    const Decomposition D(f, P, fc.q, fc.d, fc.ball_order);
    const double ess = essential_norm_tail(hankel_spectrum(f, B, ac.margin)).estimate;
    for (double t : ac.t) {
      const CompactApproximation ca =
          ctx.timed(f.name + "-t" + format_double(t), [&] { return compact_approximant(D, t, solver, B, ac.margin); });
      rows.push_back({f.name, t, ca.gap, ess});
      if (spectra)
        for (std::size_t k = 0; k < ca.difference_spectrum.size(); ++k)
          spectra->add({f.name, t, static_cast<long long>(k + 1), ca.difference_spectrum[k]});
    }
  }
  return rows;
}

void cmd_compact_approx(Context& ctx) {
  CsvTable spectra({"symbol", "t", "k", "s_k"});
  const auto rows = gap_rows(ctx, &spectra);
  CsvTable t({"symbol", "t", "gap", "essential_tail"});
  for (const auto& r : rows) t.add({r.symbol, r.t, r.gap, r.ess});
  ctx.emit("gaps.csv", t);
  ctx.emit("difference_spectra.csv", spectra);
}

struct VerdictRow {
  std::string symbol, gauge;
  bool sqrt_convex = false;
  CriterionRow row;
};

std::vector<VerdictRow> verdict_rows(Context& ctx) {
  const auto& fc = ctx.cfg.functional;
  const FockBasis B = spectral_basis(ctx.cfg, ctx.cfg.basis.degree, ctx.cfg.basis.margin);
  const Lattice L = make_lattice(ctx.cfg);
  const auto gauges = make_gauges(ctx.cfg);
  std::vector<VerdictRow> out;
  for (const auto& f : make_symbols(ctx.cfg)) {
    const SingularSpectrum S = ctx.timed(f.name + "-spectrum", [&] { return hankel_spectrum(f, B, ctx.cfg.basis.margin); });
    for (const auto& h : gauges) {
      const auto rows =
          ctx.timed(f.name + "-" + h.describe(), [&] { return schatten_h_criterion(f, h, fc.r, fc.d, L, S, ctx.cfg.gauge.c_grid); });
      for (const auto& r : rows) out.push_back({f.name, h.describe(), h.sqrt_convex(), r});
    }
  }
  return out;
}

CsvTable verdict_table(const std::vector<VerdictRow>& rows) {
  CsvTable t({"symbol", "gauge", "sqrt_convex", "c", "integral_total", "integral_tail_ratio", "integral_convergent",
              "sum_total", "sum_tail_ratio", "sum_convergent", "agree"});
  for (const auto& v : rows)
    t.add({v.symbol, v.gauge, static_cast<long long>(v.sqrt_convex), v.row.c, v.row.integral.total,
           v.row.integral.tail_ratio, static_cast<long long>(v.row.integral.convergent), v.row.sum.total,
           v.row.sum.tail_ratio, static_cast<long long>(v.row.sum.convergent), static_cast<long long>(v.row.agree())});
  return t;
}

void cmd_schatten(Context& ctx) { ctx.emit("verdicts.csv", verdict_table(verdict_rows(ctx))); }

MeasureModel make_measure(const ExperimentConfig& c) {
  if (c.berezin.measure == "lebesgue") return MeasureModel::lebesgue();
  if (c.berezin.measure == "gaussian-density")
    return MeasureModel::with_density([](Complex w) { return std::exp(-std::norm(w)); });
  const Lattice L = make_lattice(c);
  return MeasureModel::atomic(L.points(), std::vector<double>(L.size(), L.cell_area()));
}

void cmd_berezin(Context& ctx) {
  const FockBasis B = plain_basis(ctx.cfg, ctx.cfg.basis.degree);
  const WeightModel& w = B.weight();
  const KernelEval K(B, w.kind() == WeightKind::gaussian ? KernelMode::closed_form_gaussian : KernelMode::basis_sum);
  const MeasureModel mu = make_measure(ctx.cfg);
  const int n = ctx.cfg.berezin.probes;
  std::vector<Complex> probes;
  for (int k = 0; k < n; ++k) probes.push_back(std::polar(3.0 * k / std::max(1, n - 1), 0.7 * k));
  CsvTable t({"x", "y", "berezin", "ball_average", "ratio"});
  double c_hat = 0.0;
  ctx.timed("probes", [&] {
    for (Complex z : probes) {
      const double bt = berezin_transform(mu, K, z, B.rule());
      const double avg = measure_average(mu, z, ctx.cfg.berezin.r);
      const double ratio = bt > 0.0 ? avg / bt : 0.0;
      c_hat = std::max(c_hat, ratio);
      t.add({z.real(), z.imag(), bt, avg, ratio});
    }
  });
  ctx.emit("berezin.csv", t);
  CsvTable s = summary_table();
  s.add({std::string("measure"), ctx.cfg.berezin.measure});
  s.add({std::string("c_hat"), c_hat});
  ctx.emit("summary.csv", s);
}

std::string text_table(const CsvTable& t) {
  // Plain-text rendering: comma cells padded into aligned columns.
  std::vector<std::vector<std::string>> cells;
  std::stringstream ss(t.render());
  std::string line;
  while (std::getline(ss, line)) {
    std::vector<std::string> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(cell);
    cells.push_back(row);
  }
  std::vector<std::size_t> width;
  for (const auto& row : cells)
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (width.size() <= i) width.push_back(0);
      width[i] = std::max(width[i], row[i].size());
    }
  std::string out;
  for (const auto& row : cells) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out += row[i];
      if (i + 1 < row.size()) out += std::string(width[i] - row[i].size() + 2, ' ');
    }
    out += '\n';
  }
  return out;
}

void cmd_thm11(Context& ctx) {
  const auto& fc = ctx.cfg.functional;
  const FockBasis B = spectral_basis(ctx.cfg, ctx.cfg.basis.degree, ctx.cfg.basis.margin);
  const FockBasis Bk = ctx.timed("kernel-basis", [&] { return plain_basis(ctx.cfg, fc.kernel_degree); });
  const double reach = fc.shells.back() + fc.r;
  const PartitionOfUnity P(covering_lattice(ctx.cfg.approx.lattice_r, reach, ctx.cfg.lattice.support_factor),
                           ctx.cfg.lattice.support_factor);
  CsvTable table({"symbol", "shell", "ess_tail", "kz_max", "g_max", "decomposition_bound"});
  CsvTable ratios({"symbol", "ess_tail", "kz_final", "g_final", "decomposition_final", "max_pairwise_ratio"});
  for (const auto& f : make_symbols(ctx.cfg)) {
    const double ess = ctx.timed(f.name + "-ess", [&] {
      return essential_norm_tail(hankel_spectrum(f, B, ctx.cfg.basis.margin)).estimate;
    });
    const RadialProfile kz = ctx.timed(f.name + "-kz", [&] { return kernel_profile(f, fc.q, Bk, fc.shells, fc.angles); });
    const RadialProfile g = ctx.timed(f.name + "-g", [&] {
      return radial_profile(f, Functional::G, fc.q, fc.r, fc.d, fc.shells, fc.angles, fc.ball_order);
    });
    const Decomposition D(f, P, fc.q, fc.d, fc.ball_order);
    const Symbol f2 = D.f2_symbol();
    std::vector<double> bound(fc.shells.size(), 0.0);
    ctx.timed(f.name + "-decomposition", [&] {
      std::vector<double> dbar_part(fc.shells.size(), 0.0), m_part(fc.shells.size(), 0.0);
      for (std::size_t i = 0; i < kz.points.size(); ++i) {
        const std::size_t s = i / static_cast<std::size_t>(fc.angles);
        const Complex z = kz.points[i];
        dbar_part[s] = std::max(dbar_part[s], std::abs(D.dbar_f1(z)));
        m_part[s] = std::max(m_part[s], mean_oscillation(f2, z, fc.r, fc.q, fc.ball_order));
      }
      for (std::size_t s = 0; s < bound.size(); ++s) bound[s] = dbar_part[s] + m_part[s];
    });
    for (std::size_t s = 0; s < fc.shells.size(); ++s)
      table.add({f.name, fc.shells[s], ess, kz.shell_max[s], g.shell_max[s], bound[s]});
    const std::vector<double> fin{ess, kz.final_value, g.final_value};
    double worst = 1.0;
    for (double a : fin)
      for (double b : fin) worst = std::max(worst, (a > 0 && b > 0) ? a / b : (a == b ? 1.0 : kInfinity));
    ratios.add({f.name, ess, kz.final_value, g.final_value, bound.back(), worst});
  }
  ctx.emit("quantities.csv", table);
  ctx.emit("ratios.csv", ratios);
  ctx.emit_text("report.txt", text_table(table) + "\n" + text_table(ratios));
}

void cmd_thm12(Context& ctx) {
  const auto rows = gap_rows(ctx, nullptr);
  CsvTable t({"symbol", "t", "gap", "essential_tail", "relative_difference"});
  for (const auto& r : rows) t.add({r.symbol, r.t, r.gap, r.ess, r.ess > 0 ? std::abs(r.gap - r.ess) / r.ess : kInfinity});
  ctx.emit("gaps.csv", t);
  ctx.emit_text("report.txt", text_table(t));
}

void cmd_thm13(Context& ctx) {
  const CsvTable t = verdict_table(verdict_rows(ctx));
  ctx.emit("verdicts.csv", t);
  ctx.emit_text("report.txt", text_table(t));
}

using Handler = std::function<void(Context&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h = {
      {"certify-weight", cmd_certify_weight},
      {"build-basis", cmd_build_basis},
      {"kernel-fit", cmd_kernel_fit},
      {"lattice", cmd_lattice},
      {"g-profile", [](Context& c) { cmd_profile(c, Functional::G); }},
      {"m-profile", [](Context& c) { cmd_profile(c, Functional::M); }},
      {"ida-norm", cmd_ida_norm},
      {"decompose", cmd_decompose},
      {"dbar-check", cmd_dbar_check},
      {"hankel-svd", cmd_hankel_svd},
      {"kz-profile", cmd_kz_profile},
      {"essential-norm", cmd_essential_norm},
      {"compact-approx", cmd_compact_approx},
      {"schatten", cmd_schatten},
      {"berezin", cmd_berezin},
      {"thm11-report", cmd_thm11},
      {"thm12-report", cmd_thm12},
      {"thm13-report", cmd_thm13},
  };
  return h;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {
      "certify-weight", "build-basis", "kernel-fit",     "lattice",        "g-profile",    "m-profile",
      "ida-norm",       "decompose",   "dbar-check",     "hankel-svd",     "kz-profile",   "essential-norm",
      "compact-approx", "schatten",    "berezin",        "thm11-report",   "thm12-report", "thm13-report"};
  return names;
}

std::string config_hash(const ExperimentConfig& cfg) {
  ExperimentConfig c = cfg;
  c.out = "-";
  return sha256_hex(c.to_config().serialize());
}

RunManifest run(const std::string& subcommand, const ExperimentConfig& cfg) {
  const auto& h = handlers();
  const auto it = h.find(subcommand);
  if (it == h.end()) throw Error(ErrorCode::invalid_argument, "unknown subcommand '" + subcommand + "'");
  cfg.validate();
  Context ctx(cfg, subcommand);
  try {
    it->second(ctx);
  } catch (const Error& e) {
    throw Error(e.code(), subcommand + ": " + e.detail());
  }
  const std::string text = render_manifest(ctx.manifest);
  write_atomic((fs::path(ctx.manifest.directory) / "manifest.txt").string(), text);
  return ctx.manifest;
}

std::string render_manifest(const RunManifest& m) {
  std::ostringstream os;
  os << "subcommand " << m.subcommand << "\n";
  os << "config_hash " << m.config_hash << "\n";
  for (const auto& [k, v] : m.module_versions) os << "module " << k << " " << v << "\n";
  for (const auto& [k, v] : m.calibration) os << "calibration " << k << " " << v << "\n";
  for (const auto& [k, v] : m.wall_times) os << "wall_time " << k << " " << format_cell(v) << "\n";
  for (const auto& f : m.files) os << "file " << f.name << " " << f.bytes << " " << f.sha256 << "\n";
  os << "config_begin\n" << m.config_text << "config_end\n";
  return os.str();
}

std::string verify_manifest(const std::string& directory) {
  const fs::path dir(directory);
  std::ifstream in(dir / "manifest.txt");
  if (!in) return "manifest.txt missing in " + directory;
  std::string line;
  int files = 0;
  while (std::getline(in, line)) {
    if (line.rfind("file ", 0) != 0) continue;
    std::istringstream ls(line.substr(5));
    std::string name, sha;
    std::size_t bytes = 0;
    ls >> name >> bytes >> sha;
    ++files;
    const fs::path p = dir / name;
    if (!fs::exists(p)) return "listed file " + name + " is missing";
    if (sha256_file(p.string()) != sha) return "checksum mismatch for " + name;
  }
  if (files == 0) return "manifest lists no files";
  return {};
}

}  // namespace focklab
