#include <cmath>

#include "doctest.h"
#include "focklab/decomposition.hpp"
#include "focklab/error.hpp"
#include "generators.hpp"

using namespace focklab;

namespace {

// Central-difference dbar of a real field.
Complex fd_dbar(const std::function<double(Complex)>& g, Complex z, double h = 1e-5) {
  const double dx = (g(z + h) - g(z - h)) / (2 * h);
  const double dy = (g(z + Complex(0, h)) - g(z - Complex(0, h))) / (2 * h);
  return 0.5 * Complex(dx, dy);
}

}  // namespace

TEST_CASE("single-point partition is identically one on its support") {
  const auto L = build_lattice({0, 0}, 1.0, Window::square(0.4));
  REQUIRE(L.size() == 1);
  const auto P = build_partition(L);
  CHECK(P.sum({0.3, 0.2}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(P.dbar_sum({0.3, 0.2})) <= 1e-14);
}

TEST_CASE("partition sums to one with vanishing dbar") {
  const auto L = build_lattice({0, 0}, 1.0, Window::square(5.0));
  const auto P = build_partition(L);
  CHECK(P.sum({0.5, 0.5}) == doctest::Approx(1.0).epsilon(1e-10));
  gen::Source src(51);
  const double half = 5.0 - P.support_radius();
  for (int i = 0; i < 30; ++i) {
    const Complex z = src.point_in_box(half - 0.1);
    CHECK(std::abs(P.sum(z) - 1.0) <= 1e-10);
    CHECK(std::abs(P.dbar_sum(z)) <= 1e-8);
    const auto loc = P.evaluate(z);
    for (double psi : loc.psi) CHECK(psi >= 0.0);
  }
}

TEST_CASE("closed-form bump derivative matches finite differences and its bound") {
  const auto L = build_lattice({0, 0}, 1.0, Window::square(3.0));
  const auto P = build_partition(L);
  gen::Source src(52);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Complex z = src.point_in_disk(P.support_radius());
    const Complex exact = P.dbar_bump(z, {0, 0});
    CHECK(std::abs(exact - fd_dbar([&](Complex u) { return P.bump(u, {0, 0}); }, z)) <= 1e-7);
    worst = std::max(worst, std::abs(exact));
  }
  CHECK(worst <= P.dbar_bump_bound() * (1 + 1e-12));
}

TEST_CASE("holomorphic symbols decompose with no correction") {
  const auto L = build_lattice({0, 0}, 1.0, Window::square(4.0));
  const auto P = build_partition(L);
  const auto f = make_symbol("holo-poly", SymbolParams{{{1, 0}, {0, -1}, {0.5, 0}}});
  const auto D = decompose(f, P, 2.0, 6);
  gen::Source src(53);
  std::vector<Complex> probes;
  for (int i = 0; i < 8; ++i) probes.push_back(src.point_in_box(0.8));
  for (const Complex z : probes) {
    CHECK(std::abs(D.f2(z)) <= 1e-8);
    CHECK(std::abs(D.dbar_f1(z)) <= 1e-8);
    CHECK(std::abs(D.f1(z) + D.f2(z) - f(z)) <= 1e-10);
  }
  const auto rep = verify_controls(D, probes, 1.0, 2.0);
  CHECK(rep.sup_dbar_f1 <= 1e-8);
  CHECK(rep.sup_m_f2 <= 1e-8);
}

TEST_CASE("conj(w) decomposition has bounded ratios and is unchanged by holomorphic shifts") {
  const auto L = build_lattice({0, 0}, 1.0, Window::square(4.0));
  const auto P = build_partition(L);
  const auto c = make_symbol("conj-linear");
  const auto shifted_f = sum(c, make_symbol("holo-poly", SymbolParams{{{2, 0}, {0, 1}, {1, 1}}}));
  const std::vector<Complex> probes{{0, 0}, {0.5, 0.3}, {-0.4, 0.6}};
  const auto a = verify_controls(decompose(c, P, 2.0, 6), probes, 1.0, 2.0);
  const auto b = verify_controls(decompose(shifted_f, P, 2.0, 6), probes, 1.0, 2.0);
  CHECK_FALSE(a.unbounded);
  CHECK(std::isfinite(a.max_ratio_dbar));
  CHECK(a.sup_dbar_f1 > 0.0);
  for (std::size_t i = 0; i < probes.size(); ++i) {
    CHECK(a.rows[i].g == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
    CHECK(std::abs(a.rows[i].dbar_f1 - b.rows[i].dbar_f1) <= 1e-8);
    CHECK(std::abs(a.rows[i].m_f2 - b.rows[i].m_f2) <= 1e-8);
    CHECK(std::abs(a.rows[i].ratio_dbar - b.rows[i].ratio_dbar) <= 1e-8);
  }
}

TEST_CASE("compact symbols leave no local data far away") {
  const double r = 0.5;
  const auto L = build_lattice({0, 0}, r, Window::square(6.0));
  const auto P = build_partition(L);
  const auto D = decompose(make_symbol("bump"), P, 2.0, 4);
  for (const Complex z : {Complex(3.2, 0), Complex(0, -3.3), Complex(2.5, 2.5)}) {
    CHECK(std::abs(D.dbar_f1(z)) <= 1e-8);
    CHECK(std::abs(D.f2(z)) <= 1e-8);
  }
}

TEST_CASE("probes outside the interior are rejected") {
  const auto L = build_lattice({0, 0}, 1.0, Window::square(3.0));
  const auto P = build_partition(L);
  const auto D = decompose(make_symbol("conj-linear"), P, 2.0, 2);
  CHECK_THROWS_AS(verify_controls(D, {Complex(2.9, 0)}, 1.0, 2.0), Error);
}
