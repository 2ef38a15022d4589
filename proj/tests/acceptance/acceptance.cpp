// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "focklab/config.hpp"
#include "focklab/dbar.hpp"
#include "focklab/decomposition.hpp"
#include "focklab/error.hpp"
#include "focklab/fock.hpp"
#include "focklab/focklab.h"
#include "focklab/hankel.hpp"
#include "focklab/lattice.hpp"
#include "focklab/oscillation.hpp"
#include "focklab/symbols.hpp"

using namespace focklab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const WeightModel kGauss = WeightModel::gaussian(1.0);

std::vector<Complex> probe_grid(double half, int n) {
  std::vector<Complex> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.emplace_back(-half + 2.0 * half * i / (n - 1), -half + 2.0 * half * j / (n - 1));
  return out;
}

Outcome kernel_engine() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const FockBasis B(kGauss, 40, basis_plane_rule(kGauss, 40));
  const KernelEval K(B, KernelMode::basis_sum);
  std::vector<Complex> pts;
  for (Complex z : probe_grid(2.0, 9))
    if (std::abs(z) <= 2.0) pts.push_back(z);
  double worst = 0.0;
  for (Complex z : pts)
    for (Complex w : pts) {
      const Complex ref = std::exp(z * std::conj(w)) / kPi;
      worst = std::max(worst, std::abs(K(z, w) - ref) / std::abs(ref));
    }
  double norm_err = 0.0;
  for (int k = 0; k <= 20; ++k)
    norm_err = std::max(norm_err, std::abs(std::expm1(2.0 * B.log_norm(k) - std::log(kPi) - std::lgamma(k + 1.0))));
  const double t = seconds(t0);
  o.require(worst <= 1e-8, "kernel relative error " + fmt(worst) + " > 1e-8");
  o.require(norm_err <= 1e-10, "c_k^2 relative error " + fmt(norm_err) + " > 1e-10");
  o.require(t < 10.0, "runtime " + fmt(t) + " s >= 10 s");
  o.note("kernel rel err " + fmt(worst) + " over " + std::to_string(pts.size() * pts.size()) + " pairs, c_k^2 rel err " +
         fmt(norm_err) + ", " + fmt(t) + " s");
  return o;
}

Outcome projection() {
  Outcome o;
  const FockBasis B(kGauss, 20, basis_plane_rule(kGauss, 20));
  double worst = 0.0;
  for (int k = 0; k <= 10; ++k) {
    const Eigen::VectorXcd c = B.project([&](Complex z) { return B.value(k, z); });
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(c.size());
    e(k) = 1.0;
    worst = std::max(worst, (c - e).norm());
  }
  const KernelEval K(B, KernelMode::basis_sum);
  const Complex one(1.0, 0.0);
  const double n2 = std::pow(lp_norm([&](Complex z) { return K(z, one); }, 2.0, B.rule(), kGauss), 2.0);
  const double k11 = K(one, one).real();
  const double rel = std::abs(n2 - k11) / k11;
  o.require(worst <= 1e-8, "||P e_k - e_k|| = " + fmt(worst));
  o.require(rel <= 1e-6, "||K(.,1)||^2 vs K(1,1) relative " + fmt(rel));
  o.note("max ||P e_k - e_k|| " + fmt(worst) + ", reproducing relative error " + fmt(rel) + " (K(1,1) = " + fmt(k11) +
         ", e/pi = " + fmt(std::exp(1.0) / kPi) + ")");
  return o;
}

Outcome lattice() {
  Outcome o;
  int checks = 0;
  for (double r : {0.5, 1.0, 2.0}) {
    const Lattice L(Complex{}, r, Window::square(5.0));
    // covering: every window point lies within r of the lattice
    for (Complex z : probe_grid(5.0, 81)) {
      ++checks;
      if (L.within(z, r).empty()) o.require(false, "uncovered point " + format_point(z) + " at r=" + fmt(r));
    }
    // separation
    double dmin = 1e300;
    for (std::size_t i = 0; i < L.size(); ++i)
      for (std::size_t j = i + 1; j < L.size(); ++j) dmin = std::min(dmin, std::abs(L.point(i) - L.point(j)));
    o.require(dmin >= L.step() * (1 - 1e-12), "separation " + fmt(dmin) + " below step at r=" + fmt(r));
    for (int K = 1; K <= 3; ++K) {
      const auto subs = split_sublattices(L, K);
      std::vector<int> seen(L.size(), 0);
      for (const auto& s : subs) {
        for (std::size_t a : s.members) ++seen[a];
        double smin = 1e300;
        for (std::size_t i = 0; i < s.members.size(); ++i)
          for (std::size_t j = i + 1; j < s.members.size(); ++j)
            smin = std::min(smin, std::abs(L.point(s.members[i]) - L.point(s.members[j])));
        if (s.members.size() > 1)
          o.require(smin >= K * L.step() * (1 - 1e-12), "sublattice separation at r=" + fmt(r) + ", K=" + std::to_string(K));
      }
      o.require(static_cast<int>(subs.size()) == K * K, "sublattice count at K=" + std::to_string(K));
      o.require(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }),
                "sublattices do not partition the lattice at r=" + fmt(r) + ", K=" + std::to_string(K));
    }
  }
  const Lattice unit(Complex{}, 1.0, Window::square(5.0));
  const int mult = covering_multiplicity(unit, Complex{}, 2.0);
  o.require(mult == 9, "covering multiplicity " + std::to_string(mult) + " != 9");
  o.note(std::to_string(checks) + " covering probes, multiplicity(0, 2) = " + std::to_string(mult));
  return o;
}

Outcome oscillation() {
  Outcome o;
  const Symbol conj = make_symbol("conj-linear");
  const auto probes = probe_grid(4.0, 5);
  double worst = 0.0;
  for (double r : {0.5, 1.0})
    for (Complex z : probes)
      worst = std::max(worst, std::abs(ida_distance(conj, z, r, 2.0).residual - r / std::sqrt(2.0)));
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n01;
  double holo = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    SymbolParams p;
    for (int k = 0; k <= kDefaultLocalDegree; ++k) {
      const double a = n01(rng);
      p.coeffs.emplace_back(a, n01(rng));
    }
    const Symbol f = make_symbol("holo-poly", p);
    for (Complex z : probes) holo = std::max(holo, ida_distance(f, z, 1.0, 2.0).residual);
  }
  bool g_le_m = true;
  for (const auto& id : {"conj-linear", "conj-gaussian", "bump", "step", "mixed", "holo-poly"}) {
    const Symbol f = make_symbol(id);
    for (double r : {0.5, 1.0})
      for (Complex z : probes) {
        const double g = ida_distance(f, z, r, 2.0).residual;
        const double m = mean_oscillation(f, z, r, 2.0);
        if (g > m * (1 + 1e-12) + 1e-14) {
          g_le_m = false;
          o.require(false, std::string("G > M for ") + id + " at " + format_point(z));
        }
      }
  }
  o.require(worst <= 1e-4, "conj-linear G deviates by " + fmt(worst));
  o.require(holo <= 1e-9, "holomorphic G = " + fmt(holo));
  o.note("|G - r/sqrt2| max " + fmt(worst) + ", holomorphic G max " + fmt(holo) + ", G <= M " + (g_le_m ? "everywhere" : "violated"));
  return o;
}

Outcome decomposition() {
  Outcome o;
  for (const auto& id : {"holo-poly", "conj-linear", "conj-gaussian", "bump", "step", "mixed"}) {
    const auto t0 = std::chrono::steady_clock::now();
    const Symbol f = make_symbol(id);
    double ratio_d[2] = {0, 0}, ratio_m[2] = {0, 0}, num_d[2] = {0, 0}, num_m[2] = {0, 0};
    bool bounded = true;
    double sum_err = 0.0;
    for (int level = 0; level < 2; ++level) {
      const double r = level == 0 ? 1.0 : 0.5;
      const Lattice L(Complex{}, r, Window::square(4.0 + 5.0 * r));
      const PartitionOfUnity P(L);
      const Decomposition D(f, P, 2.0, kDefaultLocalDegree);
      std::vector<Complex> probes;
      for (Complex z : probe_grid(2.0, 5)) probes.push_back(z + Complex(0.13, 0.07));
      const ControlReport rep = verify_controls(D, probes, r, 2.0);
      for (const auto& row : rep.rows)
        sum_err = std::max(sum_err, std::abs(row.f1 + row.f2 - row.f) / std::max(1.0, std::abs(row.f)));
      ratio_d[level] = rep.max_ratio_dbar;
      ratio_m[level] = rep.max_ratio_m;
      num_d[level] = rep.sup_dbar_f1;
      num_m[level] = rep.sup_m_f2;
      bounded = bounded && !rep.unbounded;
    }
    const double t = seconds(t0);
    const std::string tag = std::string(id) + ": ";
    o.require(sum_err <= 4e-16, tag + "f1 + f2 != f (" + fmt(sum_err) + ")");
    o.require(t < 60.0, tag + "runtime " + fmt(t) + " s");
    if (std::string(id) == "holo-poly") {
      o.require(std::max(num_d[0], num_d[1]) <= 1e-8 && std::max(num_m[0], num_m[1]) <= 1e-8,
                tag + "holomorphic numerators " + fmt(std::max(num_d[0], num_d[1])) + ", " + fmt(std::max(num_m[0], num_m[1])));
      o.note(tag + "numerators " + fmt(std::max(num_d[0], num_d[1])) + ", " + fmt(std::max(num_m[0], num_m[1])));
      continue;
    }
    o.require(bounded, tag + "a ratio is unbounded");
    auto stable = [](double a, double b) { return a == b || (a > 0 && b > 0 && std::abs(b / a - 1.0) <= 0.2); };
    o.require(stable(ratio_d[0], ratio_d[1]),
              tag + "dbar ratio moves " + fmt(ratio_d[0]) + " -> " + fmt(ratio_d[1]) + " under refinement");
    o.require(stable(ratio_m[0], ratio_m[1]),
              tag + "M ratio moves " + fmt(ratio_m[0]) + " -> " + fmt(ratio_m[1]) + " under refinement");
    o.note(tag + "dbar " + fmt(ratio_d[0]) + "->" + fmt(ratio_d[1]) + ", M " + fmt(ratio_m[0]) + "->" + fmt(ratio_m[1]) +
           " (" + fmt(t) + " s)");
  }
  return o;
}

Outcome dbar_solver() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  DbarSolver solver(kGauss);
  const auto family = gaussian_test_family(5);
  std::vector<ZeroOneForm> forms;
  for (const auto& t : family) forms.push_back(t.form);
  std::vector<Complex> probes;
  for (double x : {-1.5, -0.5, 0.5, 1.5})
    for (double y : {-1.0, 0.25, 1.0}) probes.emplace_back(x, y);
  const CalibrationReport cal = calibrate_orientation(solver, forms, probes);
  o.require(cal.unique, "orientation constant is not unique");
  double worst = 0.0;
  for (const auto& t : family) {
    const auto rows = solution_residuals(solver, t.form, probes);
    double mr = 0.0, mm = 0.0;
    for (const auto& r : rows) {
      mr = std::max(mr, r.residual);
      mm = std::max(mm, r.magnitude);
    }
    worst = std::max(worst, mr / mm);
  }
  o.require(worst <= 1e-3, "residual " + fmt(worst) + " of max|w|");
  const FockBasis B(kGauss, 30, basis_plane_rule(kGauss, 30));
  const KernelEval K(B, KernelMode::closed_form_gaussian);
  double ident = 0.0;
  for (const auto& id : {"conj-linear", "conj-gaussian", "bump"})
    for (Complex a : {Complex(0.0, 0.0), Complex(0.6, -0.4)}) {
      const auto rep = hankel_via_dbar(solver, make_symbol(id), weighted_normalized_kernel(K, a), B);
      ident = std::max(ident, rep.relative_error);
    }
  o.require(ident <= 5e-2, "Hankel identity relative error " + fmt(ident));
  const double t = seconds(t0);
  o.require(t < 120.0, "runtime " + fmt(t) + " s");
  o.note("c0 = " + cal.label + " (residual " + fmt(cal.residual) + "), max relative residual " + fmt(worst) +
         ", identity error " + fmt(ident) + ", " + fmt(t) + " s");
  return o;
}

Outcome hankel_spectra() {
  Outcome o;
  const FockBasis B(kGauss, 20, hankel_plane_rule(kGauss, 20, 10));
  double holo = 0.0;
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n01;
  bool certified = true;
  double shift = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    SymbolParams p;
    for (int k = 0; k <= 4; ++k) {
      const double a = n01(rng);
      p.coeffs.emplace_back(a, n01(rng));
    }
    const SingularSpectrum S = hankel_spectrum(make_symbol("holo-poly", p), B, 10);
    holo = std::max(holo, S.values.front());
    certified = certified && S.certified;
    shift = std::max(shift, S.certificate_shift);
  }
  const SingularSpectrum C = hankel_spectrum(make_symbol("conj-linear"), B, 10);
  double dev = 0.0;
  for (int k = 0; k < 15; ++k) dev = std::max(dev, std::abs(C.values[k] - 1.0));
  certified = certified && C.certified;
  shift = std::max(shift, C.certificate_shift);
  for (const auto& id : {"conj-gaussian", "bump", "mixed"}) {
    const SingularSpectrum S = hankel_spectrum(make_symbol(id), B, 10);
    certified = certified && S.certified;
    shift = std::max(shift, S.certificate_shift);
  }
  o.require(holo <= 1e-8, "holomorphic s1 = " + fmt(holo));
  o.require(dev <= 1e-3, "conj-linear |s_k - 1| = " + fmt(dev));
  o.require(certified, "a stability certificate failed (shift " + fmt(shift) + ")");
  o.note("holomorphic s1 " + fmt(holo) + ", conj-linear max |s_k - 1| " + fmt(dev) + ", max certificate shift " + fmt(shift));
  return o;
}

struct Bracket {
  double ess = 0, kz = 0, g = 0;
};

Outcome bracket() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const FockBasis B(kGauss, 40, hankel_plane_rule(kGauss, 40, 10));
  const FockBasis Bk(kGauss, 90, basis_plane_rule(kGauss, 90));
  const std::vector<double> shells{1, 2, 3, 4, 5};
  std::vector<std::pair<std::string, Bracket>> rows;
  for (const auto& id : {"conj-linear", "conj-gaussian", "bump", "mixed"}) {
    const Symbol f = make_symbol(id);
    Bracket b;
    b.ess = essential_norm_tail(hankel_spectrum(f, B, 10)).estimate;
    b.kz = kernel_profile(f, 2.0, Bk, shells, 8).final_value;
    b.g = radial_profile(f, Functional::G, 2.0, 1.0, kDefaultLocalDegree, shells, 8).final_value;
    rows.emplace_back(id, b);
  }
  const Bracket ref = rows[0].second;
  for (const auto& [id, b] : rows) {
    const bool vanishing = id == "conj-gaussian" || id == "bump";
    const double vals[3] = {b.ess, b.kz, b.g};
    if (vanishing) {
      o.require(b.ess < 1e-3 && b.kz < 1e-3 && b.g < 1e-3, id + ": not all three quantities vanish");
      o.require(b.ess < 0.05 * ref.ess && b.kz < 0.05 * ref.kz && b.g < 0.05 * ref.g,
                id + ": not below 0.05 of the conj-linear values");
    } else {
      double worst = 1.0;
      for (double a : vals)
        for (double c : vals) worst = std::max(worst, (a > 0 && c > 0) ? a / c : 1e300);
      o.require(worst <= 10.0, id + ": pairwise ratio " + fmt(worst));
    }
    o.note(id + " (" + fmt(b.ess) + ", " + fmt(b.kz) + ", " + fmt(b.g) + ")");
  }
  const double t = seconds(t0);
  o.require(t < 300.0, "runtime " + fmt(t) + " s");
  o.note(fmt(t) + " s");
  return o;
}

Outcome approximants() {
  Outcome o;
  DbarSolver solver(kGauss);
  std::vector<ZeroOneForm> forms;
  for (const auto& t : gaussian_test_family(3)) forms.push_back(t.form);
  std::vector<Complex> probes{{0.5, 0.25}, {-1.0, 0.5}, {1.5, -1.0}};
  calibrate_orientation(solver, forms, probes);

  auto gap = [&](const char* id, double t, int degree, int margin, double rl, double* ess) {
    const FockBasis B(kGauss, degree, hankel_plane_rule(kGauss, degree, margin));
    const Symbol f = make_symbol(id);
    const Lattice L(Complex{}, rl, Window::square(t + 1.5 + 3.0 * rl));
    const Decomposition D(f, PartitionOfUnity(L), 2.0, kDefaultLocalDegree);
    if (ess) *ess = essential_norm_tail(hankel_spectrum(f, B, margin)).estimate;
    return compact_approximant(D, t, solver, B, margin).gap;
  };
  double ess = 0.0;
  const double g4 = gap("mixed", 4.0, 30, 30, 0.5, &ess);
  const double g2 = gap("bump", 2.0, 20, 20, 0.25, nullptr);
  o.require(g4 >= 0.5, "mixed gap(4) = " + fmt(g4));
  o.require(std::abs(g4 - ess) <= 0.5 * ess, "|gap(4) - ess| = " + fmt(std::abs(g4 - ess)));
  o.require(g2 <= 1e-2, "bump gap(2) = " + fmt(g2));
  o.note("mixed gap(4) " + fmt(g4) + " vs ess-tail " + fmt(ess) + ", bump gap(2) " + fmt(g2));
  return o;
}

Outcome schatten() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const FockBasis B(kGauss, 40, hankel_plane_rule(kGauss, 40, 10));
  const Lattice L(Complex{}, 1.0, Window::square(6.0));
  const std::vector<double> c_grid{0.5, 1.0, 2.0};
  int agree = 0, total = 0;
  for (const auto& id : symbol_families()) {
    const Symbol f = make_symbol(id);
    const SingularSpectrum S = hankel_spectrum(f, B, 10);
    for (double p : {1.0, 2.0, 4.0}) {
      for (const auto& row : schatten_h_criterion(f, SchattenGauge::power(p), 1.0, kDefaultLocalDegree, L, S, c_grid)) {
        ++total;
        agree += row.agree();
        const std::string tag = id + " p=" + fmt(p) + " c=" + fmt(row.c);
        o.require(row.agree(), tag + " verdicts differ (integral tail " + fmt(row.integral.tail_ratio) + ", sum tail " +
                                   fmt(row.sum.tail_ratio) + ")");
        if (id == "bump") o.require(row.integral.convergent && row.sum.convergent, tag + " not convergent");
        if (id == "conj-linear") o.require(!row.integral.convergent && !row.sum.convergent, tag + " not divergent");
      }
    }
  }
  const double t = seconds(t0);
  o.require(t < 180.0, "runtime " + fmt(t) + " s");
  o.note(std::to_string(agree) + "/" + std::to_string(total) + " verdict pairs agree, " + fmt(t) + " s");
  return o;
}

Outcome berezin() {
  Outcome o;
  const FockBasis B(kGauss, 40, basis_plane_rule(kGauss, 40));
  const KernelEval K(B, KernelMode::closed_form_gaussian);
  std::vector<Complex> probes;
  for (int k = 0; k < 12; ++k) probes.push_back(std::polar(0.25 * k, 0.9 * k));
  double leb = 0.0;
  for (Complex z : probes) leb = std::max(leb, std::abs(berezin_transform(MeasureModel::lebesgue(), K, z, B.rule()) - 1.0));
  const MeasureModel g = MeasureModel::with_density([](Complex w) { return std::exp(-std::norm(w)); });
  double c_hat = 0.0;
  for (Complex z : probes)
    c_hat = std::max(c_hat, measure_average(g, z, 1.0) / berezin_transform(g, K, z, B.rule()));
  o.require(leb <= 1e-8, "Lebesgue Berezin deviates by " + fmt(leb));
  o.require(c_hat <= 5.0, "C_hat = " + fmt(c_hat));
  o.note("Lebesgue max |mu~ - 1| " + fmt(leb) + ", Gaussian-density C_hat " + fmt(c_hat));
  return o;
}

std::vector<std::pair<std::string, std::string>> csv_bodies(const std::string& dir) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".csv" || e.path().extension() == ".txt") {
      if (e.path().filename() == "manifest.txt") continue;
      std::ifstream in(e.path(), std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      out.emplace_back(e.path().filename().string(), ss.str());
    }
  std::sort(out.begin(), out.end());
  return out;
}

Outcome reproducibility() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "focklab_acceptance_repro";
  fs::remove_all(root);
  const std::vector<std::string> subs{"certify-weight", "build-basis", "kernel-fit", "lattice",   "g-profile",
                                      "m-profile",      "ida-norm",    "hankel-svd", "kz-profile", "essential-norm",
                                      "berezin",        "schatten",    "dbar-check"};
  int compared = 0;
  for (const auto& sub : subs) {
    std::string dirs[2];
    for (int rep = 0; rep < 2; ++rep) {
      fl_config* cfg = nullptr;
      fl_config_new(&cfg);
      const std::string out = (root / ("run" + std::to_string(rep))).string();
      fl_config_set(cfg, "run.out", out.c_str());
      fl_config_set(cfg, "run.seed", "12345");
      fl_config_set(cfg, "symbol.families", "conj-gaussian,step");
      fl_config_set(cfg, "functional.kernel_degree", "40");
      fl_config_set(cfg, "functional.shells", "0.5,1.5");
      char dir[4096];
      const fl_status s = fl_run(sub.c_str(), cfg, dir, sizeof dir);
      fl_config_free(cfg);
      if (s != FL_OK) {
        o.require(false, sub + " failed: " + fl_last_error());
        break;
      }
      dirs[rep] = dir;
      if (fl_verify_manifest(dir) != FL_OK) o.require(false, sub + " manifest: " + fl_last_error());
    }
    if (dirs[0].empty() || dirs[1].empty()) continue;
    const auto a = csv_bodies(dirs[0]), b = csv_bodies(dirs[1]);
    o.require(a == b && !a.empty(), sub + " outputs differ between runs");
    compared += static_cast<int>(a.size());
  }
  fs::remove_all(root);
  o.note(std::to_string(subs.size()) + " subcommands, " + std::to_string(compared) + " files byte-identical");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"kernel engine", kernel_engine},
      {"projection and reproducing identity", projection},
      {"lattice invariants", lattice},
      {"oscillation oracles", oscillation},
      {"decomposition controls", decomposition},
      {"dbar solver", dbar_solver},
      {"Hankel spectra", hankel_spectra},
      {"equivalence bracket", bracket},
      {"compact approximants", approximants},
      {"Schatten-h verdicts", schatten},
      {"Berezin layer", berezin},
      {"reproducibility", reproducibility},
  };
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::printf("criterion %2d %s: %s [%s] (%.1f s)\n", id, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str(), seconds(t0));
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
