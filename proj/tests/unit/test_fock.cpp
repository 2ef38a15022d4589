#include <cmath>

#include "doctest.h"
#include "focklab/error.hpp"
#include "focklab/fock.hpp"
#include "generators.hpp"

using namespace focklab;

namespace {

FockBasis gaussian_basis(double alpha, int degree) {
  const auto w = WeightModel::gaussian(alpha);
  return build_basis(w, degree, basis_plane_rule(w, degree));
}

}  // namespace

TEST_CASE("monomial norms follow the factorial law") {
  const auto b1 = gaussian_basis(1.0, 5);
  for (int k = 0; k <= 5; ++k) CHECK(b1.norm_sq(k) == doctest::Approx(kPi * std::tgamma(k + 1.0)).epsilon(1e-12));
  const auto b2 = gaussian_basis(2.0, 5);
  for (int k = 0; k <= 5; ++k)
    CHECK(b2.norm_sq(k) == doctest::Approx(0.5 * kPi * std::tgamma(k + 1.0) / std::pow(2.0, k)).epsilon(1e-12));
}

TEST_CASE("basis is orthonormal under the plane rule") {
  const auto b = gaussian_basis(1.0, 25);
  const auto& rule = b.rule();
  const Eigen::MatrixXcd S = b.weighted_samples(rule.nodes);
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), rule.weights.size());
  const Eigen::MatrixXcd gram = S.adjoint() * w.asDiagonal() * S;
  CHECK((gram - Eigen::MatrixXcd::Identity(26, 26)).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("closed-form kernel values") {
  const KernelEval K(gaussian_basis(1.0, 40), KernelMode::closed_form_gaussian);
  CHECK(std::abs(kernel(K, {1, 0}, {1, 0}) - std::exp(1.0) / kPi) <= 1e-12);
  const auto k0 = normalized_kernel(K, {0, 0});
  gen::Source src(11);
  for (int i = 0; i < 10; ++i) CHECK(std::abs(k0(src.point_in_box(3.0)) - 1.0 / std::sqrt(kPi)) <= 1e-14);
  const auto k2 = weighted_normalized_kernel(K, {2, 0});
  CHECK(std::abs(k2({0, 0})) == doctest::Approx(std::exp(-2.0) / std::sqrt(kPi)).epsilon(1e-12));
}

TEST_CASE("basis-sum kernel matches the closed form") {
  const auto b = gaussian_basis(1.0, 80);
  const KernelEval sum(b, KernelMode::basis_sum);
  const KernelEval exact(b, KernelMode::closed_form_gaussian);
  gen::Source src(12);
  for (int i = 0; i < 30; ++i) {
    const Complex z = src.point_in_disk(2.0), w = src.point_in_disk(2.0);
    const Complex a = sum.weighted(z, w), e = exact.weighted(z, w);
    CHECK(std::abs(a - e) <= 1e-11 * std::abs(e) + 1e-15);
  }
  CHECK(truncation_error(b, 2.0) < 1e-10);
}

TEST_CASE("kernel is Hermitian and positive on the diagonal") {
  const KernelEval K(gaussian_basis(1.5, 60), KernelMode::basis_sum);
  gen::Source src(13);
  for (int i = 0; i < 25; ++i) {
    const Complex z = src.point_in_disk(2.0), w = src.point_in_disk(2.0);
    CHECK(std::abs(K(z, w) - std::conj(K(w, z))) <= 1e-12 * std::abs(K(z, w)));
    CHECK(K(z, z).real() > 0.0);
    CHECK(std::abs(K(z, z).imag()) <= 1e-12 * K(z, z).real());
  }
}

TEST_CASE("weighted norms of constants and kernels") {
  const auto w = WeightModel::gaussian(1.0);
  const auto b = gaussian_basis(1.0, 30);
  CHECK(lp_norm([](Complex) { return Complex(1.0); }, 2.0, b.rule(), w) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-12));
  const KernelEval K(b, KernelMode::closed_form_gaussian);
  const auto kz = [&](Complex u) { return K(u, {1, 0}); };
  CHECK(lp_norm(kz, 2.0, b.rule(), w) == doctest::Approx(std::exp(0.5) / std::sqrt(kPi)).epsilon(1e-10));
}

TEST_CASE("projection annihilates anti-holomorphic monomials and fixes holomorphic ones") {
  const KernelEval K(gaussian_basis(1.0, 20), KernelMode::closed_form_gaussian);
  const auto pc = project(K, [](Complex u) { return std::conj(u); });
  CHECK(pc.cwiseAbs().maxCoeff() <= 1e-12);
  const auto pn = project(K, [](Complex u) { return Complex(std::norm(u)); });
  // |w|^2 projects onto the constant <|w|^2, e_0> = pi / sqrt(pi).
  CHECK(std::abs(pn(0) - std::sqrt(kPi)) <= 1e-10);
  CHECK(pn.tail(20).cwiseAbs().maxCoeff() <= 1e-10);
  gen::Source src(14);
  for (int k = 0; k <= 20; k += 4) {
    const auto pk = project(K, [&](Complex u) { return K.basis().value(k, u); });
    Eigen::VectorXcd ek = Eigen::VectorXcd::Zero(21);
    ek(k) = 1.0;
    CHECK((pk - ek).norm() <= 1e-10);
  }
}

TEST_CASE("reproducing property on random polynomials") {
  gen::Source src(15);
  const auto b = gaussian_basis(1.0, 30);
  const KernelEval K(b, KernelMode::closed_form_gaussian);
  for (int trial = 0; trial < 5; ++trial) {
    const auto p = src.holomorphic_polynomial(src.integer(0, 8));
    const Complex z = src.point_in_disk(1.5);
    const auto coeffs = b.project_weighted([&](Complex u) { return p(u) * std::exp(-b.weight().value(u)); });
    CHECK(std::abs(b.synthesize(coeffs, z) - p(z)) <= 1e-9 * (1 + std::abs(p(z))));
  }
}

TEST_CASE("kernel estimate fit on gaussian pairs") {
  const KernelEval K(gaussian_basis(1.0, 40), KernelMode::closed_form_gaussian);
  gen::Source src(16);
  std::vector<ProbePair> pairs;
  for (int i = 0; i < 40; ++i) pairs.push_back({src.point_in_disk(2.0), src.point_in_disk(2.0)});
  const auto est = fit_kernel_estimates(K, pairs, 0.5);
  CHECK(est.valid);
  CHECK(est.theta > 0.0);
  CHECK(est.c1 >= est.c1_fit * (1 - 1e-12));
  // Diagonal pairs sit at |K| exp(-2 phi) = 1/pi, so C2 cannot exceed it.
  CHECK(est.c2 <= 1.0 / kPi + 1e-12);
}

TEST_CASE("degree cap is reported when the rule is too small") {
  const auto w = WeightModel::gaussian(1.0);
  const auto small = gaussian_plane_rule(40, 1.0);
  CHECK_THROWS_AS(build_basis(w, 200, small), Error);
}
