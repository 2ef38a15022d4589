#include "focklab/lattice.hpp"

#include <cmath>

#include "focklab/error.hpp"

namespace focklab {

namespace {

long floor_mod(long a, long k) {
  const long r = a % k;
  return r < 0 ? r + k : r;
}

}  // namespace

Lattice::Lattice(Complex base, double r, Window window, std::size_t max_points, int dimension)
    : base_(base), r_(r), dimension_(dimension), window_(window) {
  if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorCode::invalid_argument, "lattice spacing r must be > 0");
  if (dimension != 1) throw Error(ErrorCode::capability, "lattice enumeration supports n = 1 only");
  if (!(window.x_max >= window.x_min) || !(window.y_max >= window.y_min))
    throw Error(ErrorCode::invalid_argument, "lattice window is empty");
  step_ = r / std::sqrt(static_cast<double>(dimension));
  const double tol = 1e-12;
  m_lo_ = static_cast<long>(std::ceil((window.x_min - base.real()) / step_ - tol));
  const long m_hi = static_cast<long>(std::floor((window.x_max - base.real()) / step_ + tol));
  s_lo_ = static_cast<long>(std::ceil((window.y_min - base.imag()) / step_ - tol));
  const long s_hi = static_cast<long>(std::floor((window.y_max - base.imag()) / step_ + tol));
  nm_ = std::max(0L, m_hi - m_lo_ + 1);
  ns_ = std::max(0L, s_hi - s_lo_ + 1);
  const double count = static_cast<double>(nm_) * static_cast<double>(ns_);
  if (count > static_cast<double>(max_points))
    throw Error(ErrorCode::capacity, "lattice window holds " + std::to_string(static_cast<long long>(count)) +
                                         " points, above the cap of " + std::to_string(max_points));
  points_.reserve(size());
  for (long s = 0; s < ns_; ++s)
    for (long m = 0; m < nm_; ++m)
      points_.push_back(base_ + step_ * Complex(static_cast<double>(m_lo_ + m), static_cast<double>(s_lo_ + s)));
}

Complex Lattice::point(std::size_t index) const { return points_.at(index); }

std::pair<long, long> Lattice::coords(std::size_t index) const {
  const long i = static_cast<long>(index);
  return {m_lo_ + i % nm_, s_lo_ + i / nm_};
}

std::vector<std::size_t> Lattice::within(Complex z, double radius) const {
  std::vector<std::size_t> out;
  if (size() == 0 || !(radius > 0.0)) return out;
  const Complex rel = (z - base_) / step_;
  const double span = radius / step_;
  const long m0 = std::max(m_lo_, static_cast<long>(std::floor(rel.real() - span)));
  const long m1 = std::min(m_lo_ + nm_ - 1, static_cast<long>(std::ceil(rel.real() + span)));
  const long s0 = std::max(s_lo_, static_cast<long>(std::floor(rel.imag() - span)));
  const long s1 = std::min(s_lo_ + ns_ - 1, static_cast<long>(std::ceil(rel.imag() + span)));
  for (long s = s0; s <= s1; ++s)
    for (long m = m0; m <= m1; ++m) {
      const std::size_t idx = static_cast<std::size_t>((s - s_lo_) * nm_ + (m - m_lo_));
      if (std::abs(z - points_[idx]) < radius) out.push_back(idx);
    }
  return out;
}

int Lattice::sublattice_id(std::size_t index, int K) const {
  const auto [m, s] = coords(index);
  return static_cast<int>(floor_mod(s, K) * K + floor_mod(m, K) + 1);
}

Lattice build_lattice(Complex base, double r, const Window& window, std::size_t max_points) {
  return Lattice(base, r, window, max_points);
}

int covering_multiplicity(const Lattice& L, Complex z, double factor) {
  if (!(factor > 0.0)) throw Error(ErrorCode::invalid_argument, "covering factor must be > 0");
  const Window safe = L.window().shrunk(factor * L.r());
  const bool inside = z.real() > safe.x_min && z.real() < safe.x_max && z.imag() > safe.y_min &&
                      z.imag() < safe.y_max;
  if (!inside)
    throw Error(ErrorCode::window, "point " + format_point(z) + " is outside the window shrunk by factor * r");
  return static_cast<int>(L.within(z, factor * L.r()).size());
}

std::vector<Sublattice> split_sublattices(const Lattice& L, int K) {
  if (K < 1) throw Error(ErrorCode::invalid_argument, "sublattice modulus K must be >= 1");
  std::vector<Sublattice> subs(static_cast<std::size_t>(K) * K);
  for (int s = 0; s < K; ++s)
    for (int m = 0; m < K; ++m) {
      Sublattice& sub = subs[static_cast<std::size_t>(s * K + m)];
      sub.modulus = K;
      sub.index = s * K + m + 1;
      sub.representative = L.base() + L.step() * Complex(m, s);
    }
  for (std::size_t i = 0; i < L.size(); ++i)
    subs[static_cast<std::size_t>(L.sublattice_id(i, K) - 1)].members.push_back(i);
  return subs;
}

}  // namespace focklab
