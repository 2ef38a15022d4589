#pragma once

#include <cstddef>
#include <vector>

#include "focklab/numeric.hpp"

namespace focklab {

struct Window {
  double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;

  static Window square(double half) { return {-half, half, -half, half}; }
  bool contains(Complex z) const {
    return z.real() >= x_min && z.real() <= x_max && z.imag() >= y_min && z.imag() <= y_max;
  }
  Window shrunk(double by) const { return {x_min + by, x_max - by, y_min + by, y_max - by}; }
};

// Square lattice {w1 + step (m + i s)} with step = r / sqrt(n), restricted to a
// closed window. Points are ordered by s, then m.
class Lattice {
 public:
  Lattice(Complex base, double r, Window window, std::size_t max_points = 4'000'000, int dimension = 1);

  Complex base() const { return base_; }
  double r() const { return r_; }
  double step() const { return step_; }
  int dimension() const { return dimension_; }
  const Window& window() const { return window_; }
  double cell_area() const { return step_ * step_; }

  std::size_t size() const { return static_cast<std::size_t>(nm_) * static_cast<std::size_t>(ns_); }
  Complex point(std::size_t index) const;
  const std::vector<Complex>& points() const { return points_; }
  // Integer coordinates (m, s) of a point.
  std::pair<long, long> coords(std::size_t index) const;
  long m_min() const { return m_lo_; }
  long s_min() const { return s_lo_; }
  long m_count() const { return nm_; }
  long s_count() const { return ns_; }

  // Indices of points a with |z - a| < radius, in lattice order.
  std::vector<std::size_t> within(Complex z, double radius) const;
  // Residue class (1-based) of a point for modulus K.
  int sublattice_id(std::size_t index, int K) const;

 private:
  Complex base_;
  double r_;
  double step_;
  int dimension_;
  Window window_;
  long m_lo_ = 0, s_lo_ = 0, nm_ = 0, ns_ = 0;
  std::vector<Complex> points_;
};

struct Sublattice {
  int modulus = 1;
  int index = 1;  // 1..K^2
  Complex representative;
  std::vector<std::size_t> members;  // indices into the parent lattice
};

Lattice build_lattice(Complex base, double r, const Window& window, std::size_t max_points = 4'000'000);

// Number of lattice points a with |z - a| < factor * r. z must lie strictly
// inside the window shrunk by factor * r.
int covering_multiplicity(const Lattice& L, Complex z, double factor);

std::vector<Sublattice> split_sublattices(const Lattice& L, int K);

}  // namespace focklab
