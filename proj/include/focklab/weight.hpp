#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "focklab/numeric.hpp"

namespace focklab {

enum class WeightKind { gaussian, perturbed_gaussian, custom };

// An admissible weight phi on C (n = 1) with declared Hessian bounds
// m I <= Hess_R phi <= M I.
//
// gradient() is the holomorphic-coordinate derivative
// d phi / dz = (d/dx - i d/dy) phi / 2, the convention paired with (z - xi)
// in the dbar solution operator.
class WeightModel {
 public:
  struct Custom {
    std::function<double(Complex)> value;
    std::function<Complex(Complex)> gradient;
    std::function<Eigen::Matrix2d(Complex)> hessian;
    // Optional phi(|z|) for radial weights; enables basis construction.
    std::function<double(double)> radial;
  };

  // phi(z) = (alpha/2)|z|^2, m = M = alpha.
  static WeightModel gaussian(double alpha);
  // phi(z) = (alpha/2)|z|^2 + epsilon sin(Re z), m = alpha - |epsilon|, M = alpha + |epsilon|.
  static WeightModel perturbed_gaussian(double alpha, double epsilon);
  // Bounds are declared by the caller and only ever verified, never inferred.
  static WeightModel custom(Custom c, double m, double M);

  WeightKind kind() const { return kind_; }
  int dimension() const { return 1; }
  double m() const { return m_; }
  double M() const { return M_; }
  double alpha() const { return alpha_; }
  double epsilon() const { return epsilon_; }

  double value(Complex z) const;
  Complex gradient(Complex z) const;
  Eigen::Matrix2d hessian(Complex z) const;

  bool is_radial() const;
  double radial_value(double rho) const;

  std::string describe() const;

 private:
  WeightModel() = default;

  WeightKind kind_ = WeightKind::gaussian;
  double alpha_ = 1.0;
  double epsilon_ = 0.0;
  double m_ = 1.0;
  double M_ = 1.0;
  Custom custom_;
};

struct ProbeSpectrum {
  Complex point;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};

struct CertificationReport {
  std::vector<ProbeSpectrum> probes;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  // Largest distance of any probed eigenvalue outside [m, M]; 0 when inside.
  double worst_violation = 0.0;
  Complex worst_point;
  bool pass = false;
};

// Closed-form eigenvalues (ascending) of a symmetric 2x2 matrix.
std::pair<double, double> symmetric_eigenvalues(const Eigen::Matrix2d& h);

CertificationReport certify_weight(const WeightModel& w, std::span<const Complex> probes, double tol);

// Max absolute deviation between the declared gradient / Hessian and central
// finite differences of phi with step h.
double finite_difference_check(const WeightModel& w, Complex z, double h);

}  // namespace focklab
