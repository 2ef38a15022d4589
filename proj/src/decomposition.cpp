#include "focklab/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "focklab/error.hpp"
#include "focklab/parallel.hpp"

namespace focklab {

namespace {

constexpr double kVanishingG = 1e-12;
constexpr double kVanishingNumerator = 1e-8;

}  // namespace

PartitionOfUnity::PartitionOfUnity(Lattice lattice, double support_factor)
    : lattice_(std::move(lattice)), support_(support_factor * lattice_.r()) {
  // The bump must stay positive on B(0, r) so the covering keeps the sum away from zero.
  if (!(support_factor > 1.0))
    throw Error(ErrorCode::invalid_argument, "bump profile must be positive on B(0, r): support factor must exceed 1");
}

double PartitionOfUnity::bump(Complex z, Complex a) const {
  const double u = std::norm(z - a) / (support_ * support_);
  return u < 1.0 ? (1.0 - u) * (1.0 - u) : 0.0;
}

Complex PartitionOfUnity::dbar_bump(Complex z, Complex a) const {
  const double r2 = support_ * support_;
  const double u = std::norm(z - a) / r2;
  return u < 1.0 ? -2.0 * (1.0 - u) * (z - a) / r2 : Complex{};
}

double PartitionOfUnity::dbar_bump_bound() const { return 4.0 / (3.0 * std::sqrt(3.0) * support_); }

PartitionOfUnity::Local PartitionOfUnity::evaluate(Complex z) const {
  Local out;
  out.index = lattice_.within(z, support_);
  const std::size_t n = out.index.size();
  std::vector<double> b(n);
  std::vector<Complex> db(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex a = lattice_.point(out.index[k]);
    b[k] = bump(z, a);
    db[k] = dbar_bump(z, a);
  }
  const double total = pairwise_sum(std::span<const double>(b));
  const Complex dtotal = pairwise_sum(std::span<const Complex>(db));
  out.psi.resize(n);
  out.dbar_psi.resize(n);
  if (!(total > 0.0)) {
    std::fill(out.psi.begin(), out.psi.end(), 0.0);
    std::fill(out.dbar_psi.begin(), out.dbar_psi.end(), Complex{});
    return out;
  }
  for (std::size_t k = 0; k < n; ++k) {
    out.psi[k] = b[k] / total;
    out.dbar_psi[k] = (db[k] * total - b[k] * dtotal) / (total * total);
  }
  return out;
}

double PartitionOfUnity::sum(Complex z) const {
  const Local l = evaluate(z);
  return pairwise_sum(std::span<const double>(l.psi));
}

Complex PartitionOfUnity::dbar_sum(Complex z) const {
  const Local l = evaluate(z);
  return pairwise_sum(std::span<const Complex>(l.dbar_psi));
}

PartitionOfUnity build_partition(const Lattice& L, double support_factor) {
  return PartitionOfUnity(L, support_factor);
}

Decomposition::Decomposition(Symbol f, PartitionOfUnity partition, double q, int d, int ball_order) {
  auto impl = std::make_shared<Impl>(Impl{std::move(f), std::move(partition), {}, 0.0});
  impl->t = impl->partition.support_radius();
  const Lattice& L = impl->partition.lattice();
  impl->h.resize(L.size());
  const BallRule base = ball_rule(0.0, impl->t, ball_order);
  parallel_for(L.size(), [&](std::size_t j) { impl->h[j] = ida_distance(impl->f, base.shifted(L.point(j)), q, d); });
  impl_ = std::move(impl);
}

Complex Decomposition::f1(Complex z) const {
  const PartitionOfUnity::Local l = impl_->partition.evaluate(z);
  std::vector<Complex> terms(l.index.size());
  for (std::size_t k = 0; k < terms.size(); ++k) terms[k] = impl_->h[l.index[k]](z) * l.psi[k];
  return pairwise_sum(std::span<const Complex>(terms));
}

Complex Decomposition::f2(Complex z) const { return impl_->f(z) - f1(z); }

Complex Decomposition::dbar_f1(Complex z) const {
  const PartitionOfUnity::Local l = impl_->partition.evaluate(z);
  std::vector<Complex> terms(l.index.size());
  for (std::size_t k = 0; k < terms.size(); ++k) terms[k] = impl_->h[l.index[k]](z) * l.dbar_psi[k];
  return pairwise_sum(std::span<const Complex>(terms));
}

Symbol Decomposition::f1_symbol() const {
  Symbol s;
  s.name = impl_->f.name + ":f1";
  const Decomposition self = *this;
  s.f = [self](Complex z) { return self.f1(z); };
  s.dbar = [self](Complex z) { return self.dbar_f1(z); };
  s.smoothness = Smoothness::c1;
  s.support = impl_->f.support;
  s.support_radius = impl_->f.support == SupportHint::compact
                         ? impl_->f.support_radius + impl_->t + impl_->partition.support_radius()
                         : 0.0;
  return s;
}

Symbol Decomposition::f2_symbol() const {
  Symbol s;
  s.name = impl_->f.name + ":f2";
  const Decomposition self = *this;
  s.f = [self](Complex z) { return self.f2(z); };
  if (impl_->f.has_dbar()) {
    s.dbar = [self, fd = impl_->f.dbar](Complex z) { return fd(z) - self.dbar_f1(z); };
  }
  s.smoothness = std::min(impl_->f.smoothness, Smoothness::c1);
  s.support = impl_->f.support;
  s.support_radius = impl_->f.support == SupportHint::compact
                         ? impl_->f.support_radius + impl_->t + impl_->partition.support_radius()
                         : 0.0;
  return s;
}

Decomposition decompose(const Symbol& f, const PartitionOfUnity& P, double q, int d, int ball_order) {
  return Decomposition(f, P, q, d, ball_order);
}

ControlReport verify_controls(const Decomposition& D, const std::vector<Complex>& probes, double r, double q, int d,
                              int ball_order) {
  if (!(r > 0.0)) throw Error(ErrorCode::invalid_argument, "control radius must be > 0");
  ControlReport rep;
  rep.r = r;
  rep.q = q;
  rep.footprint_radius = r + D.ball_radius() + D.partition().support_radius();
  const Window safe = D.partition().interior().shrunk(r);
  for (const Complex z : probes)
    if (!safe.contains(z))
      throw Error(ErrorCode::window, "probe " + format_point(z) + " is too close to the partition window edge");

  const Symbol f2 = D.f2_symbol();
  rep.rows.resize(probes.size());
  parallel_for(probes.size(), [&](std::size_t i) {
    ControlRow& row = rep.rows[i];
    const Complex z = probes[i];
    row.z = z;
    row.f = D.source()(z);
    row.f1 = D.f1(z);
    row.f2 = row.f - row.f1;
    row.dbar_f1 = D.dbar_f1(z);
    row.m_f2 = mean_oscillation(f2, z, r, q, ball_order);
    row.g = ida_distance(D.source(), z, r, q, d, ball_order).residual;
    row.g_footprint = ida_distance(D.source(), z, rep.footprint_radius, q, d, ball_order).residual;
  });

  const double inf = std::numeric_limits<double>::infinity();
  for (ControlRow& row : rep.rows) {
    const double nd = std::abs(row.dbar_f1);
    rep.sup_dbar_f1 = std::max(rep.sup_dbar_f1, nd);
    rep.sup_m_f2 = std::max(rep.sup_m_f2, row.m_f2);
    if (row.g_footprint > kVanishingG) {
      row.ratio_dbar = nd / row.g_footprint;
      row.ratio_m = row.m_f2 / row.g_footprint;
    } else {
      row.ratio_dbar = nd > kVanishingNumerator ? inf : 0.0;
      row.ratio_m = row.m_f2 > kVanishingNumerator ? inf : 0.0;
    }
    rep.max_ratio_dbar = std::max(rep.max_ratio_dbar, row.ratio_dbar);
    rep.max_ratio_m = std::max(rep.max_ratio_m, row.ratio_m);
  }
  rep.unbounded = std::isinf(rep.max_ratio_dbar) || std::isinf(rep.max_ratio_m);
  return rep;
}

}  // namespace focklab
