#pragma once

#include <memory>
#include <vector>

#include "focklab/lattice.hpp"
#include "focklab/oscillation.hpp"
#include "focklab/symbols.hpp"

namespace focklab {

// Quartic bumps b(rho) = (1 - (rho / R)^2)^2 on rho < R = support_factor * r
// around each lattice point, normalized to sum to one.
class PartitionOfUnity {
 public:
  PartitionOfUnity(Lattice lattice, double support_factor = 2.0);

  const Lattice& lattice() const { return lattice_; }
  double support_radius() const { return support_; }

  double bump(Complex z, Complex a) const;
  Complex dbar_bump(Complex z, Complex a) const;
  // Largest |dbar b| over the plane: 4 / (3 sqrt(3) R), attained at rho = R / sqrt(3).
  double dbar_bump_bound() const;

  struct Local {
    std::vector<std::size_t> index;
    std::vector<double> psi;
    std::vector<Complex> dbar_psi;
  };
  // Members with z in their support, with psi_j(z) and dbar psi_j(z).
  Local evaluate(Complex z) const;
  double sum(Complex z) const;
  Complex dbar_sum(Complex z) const;

  // Region where every evaluation sees all overlapping bumps.
  Window interior() const { return lattice_.window().shrunk(support_); }

 private:
  Lattice lattice_;
  double support_;
};

PartitionOfUnity build_partition(const Lattice& L, double support_factor = 2.0);

class Decomposition {
 public:
  Decomposition(Symbol f, PartitionOfUnity partition, double q, int d, int ball_order = kDefaultBallOrder);

  const Symbol& source() const { return impl_->f; }
  const PartitionOfUnity& partition() const { return impl_->partition; }
  const std::vector<LocalApproximation>& approximants() const { return impl_->h; }
  double ball_radius() const { return impl_->t; }

  Complex f1(Complex z) const;
  Complex f2(Complex z) const;
  // sum_j h_j dbar psi_j
  Complex dbar_f1(Complex z) const;

  Symbol f1_symbol() const;
  Symbol f2_symbol() const;

 private:
  struct Impl {
    Symbol f;
    PartitionOfUnity partition;
    std::vector<LocalApproximation> h;
    double t = 0.0;
  };
  std::shared_ptr<const Impl> impl_;
};

// h_j minimizes the q-mean distance to f on B(a_j, 2r).
Decomposition decompose(const Symbol& f, const PartitionOfUnity& P, double q, int d,
                        int ball_order = kDefaultBallOrder);

struct ControlRow {
  Complex z;
  Complex f, f1, f2, dbar_f1;
  double m_f2 = 0.0;
  double g = 0.0;            // G_{q,r}(f)(z)
  double g_footprint = 0.0;  // G at the radius of the data that determines f1 near z
  double ratio_dbar = 0.0;
  double ratio_m = 0.0;
};

struct ControlReport {
  double r = 0.0;
  double q = 2.0;
  double footprint_radius = 0.0;
  std::vector<ControlRow> rows;
  double sup_dbar_f1 = 0.0;
  double sup_m_f2 = 0.0;
  double max_ratio_dbar = 0.0;
  double max_ratio_m = 0.0;
  // A nonzero numerator met a vanishing G somewhere.
  bool unbounded = false;
};

// Ratios are taken against G at the footprint radius r + 2 t, the ball that
// contains every value of f entering f1 on B(z, r).
ControlReport verify_controls(const Decomposition& D, const std::vector<Complex>& probes, double r, double q,
                              int d = kDefaultLocalDegree, int ball_order = kDefaultBallOrder);

}  // namespace focklab
