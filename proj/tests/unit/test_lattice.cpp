#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "focklab/error.hpp"
#include "focklab/lattice.hpp"
#include "generators.hpp"

using namespace focklab;

TEST_CASE("unit lattice on a 7x7 window") {
  const auto L = build_lattice({0, 0}, 1.0, Window::square(3.0));
  CHECK(L.size() == 49);
  CHECK(L.point(0) == Complex(-3, -3));
  CHECK(L.point(1) == Complex(-2, -3));
}

TEST_CASE("shifted coarse lattice enumerates the closed window") {
  const auto L = build_lattice({0.5, 0}, 2.0, Window::square(2.0));
  // x in {-1.5, 0.5}, y in {-2, 0, 2}
  CHECK(L.size() == 6);
  for (const Complex a : L.points()) CHECK(L.window().contains(a));
}

TEST_CASE("covering multiplicities from enumeration") {
  const auto L = build_lattice({0, 0}, 1.0, Window::square(5.0));
  CHECK(covering_multiplicity(L, {0, 0}, 2.0) == 9);
  CHECK(covering_multiplicity(L, {0, 0}, 1.0) >= 1);
  CHECK(covering_multiplicity(L, {0.5, 0.5}, 1.0) == 4);
}

TEST_CASE("sublattice counts") {
  const auto L = build_lattice({0, 0}, 1.0, Window::square(3.0));
  CHECK(split_sublattices(L, 1).size() == 1);
  CHECK(split_sublattices(L, 1)[0].members.size() == L.size());
  CHECK(split_sublattices(L, 2).size() == 4);
  const auto s3 = split_sublattices(L, 3);
  CHECK(s3.size() == 9);
  std::size_t total = 0;
  for (const auto& s : s3) total += s.members.size();
  CHECK(total == L.size());
}

TEST_CASE("property: separation, covering and partition hold on random lattices") {
  gen::Source src(21);
  for (int trial = 0; trial < 12; ++trial) {
    const double r = src.uniform(0.3, 2.0);
    const Complex base = src.point_in_box(0.5);
    const double half = src.uniform(3.0, 6.0);
    const auto L = build_lattice(base, r, Window::square(half));
    const double step = L.step();
    CHECK(step == doctest::Approx(r));

    // Nearest-neighbour distance equals the step.
    for (std::size_t i = 0; i + 1 < L.size(); i += 7)
      for (std::size_t j = i + 1; j < L.size(); ++j) CHECK(std::abs(L.point(i) - L.point(j)) >= step * (1 - 1e-12));

    // Every interior point is within r / sqrt(2) of the lattice.
    for (int k = 0; k < 20; ++k) {
      const Complex z = src.point_in_box(half - r);
      double best = 1e300;
      for (const Complex a : L.points()) best = std::min(best, std::abs(z - a));
      CHECK(best <= step / std::sqrt(2.0) + 1e-12);
    }

    const int K = src.integer(1, 3);
    const auto subs = split_sublattices(L, K);
    std::vector<int> seen(L.size(), 0);
    for (const auto& s : subs) {
      for (std::size_t idx : s.members) {
        ++seen[idx];
        CHECK(L.sublattice_id(idx, K) == s.index);
      }
      // Members of one class are K steps apart.
      for (std::size_t a = 0; a + 1 < s.members.size() && a < 5; ++a)
        CHECK(std::abs(L.point(s.members[a]) - L.point(s.members[a + 1])) >= K * step * (1 - 1e-12));
    }
    CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
  }
}

TEST_CASE("within returns exactly the points inside the open disk") {
  gen::Source src(22);
  const auto L = build_lattice({0.1, -0.2}, 0.7, Window::square(4.0));
  for (int k = 0; k < 20; ++k) {
    const Complex z = src.point_in_box(3.0);
    const double rad = src.uniform(0.2, 2.0);
    const auto got = L.within(z, rad);
    std::vector<std::size_t> expect;
    for (std::size_t i = 0; i < L.size(); ++i)
      if (std::abs(z - L.point(i)) < rad) expect.push_back(i);
    CHECK(got == expect);
  }
}

TEST_CASE("window and capacity errors") {
  const auto L = build_lattice({0, 0}, 1.0, Window::square(2.0));
  CHECK_THROWS_AS(covering_multiplicity(L, {1.9, 0}, 2.0), Error);
  CHECK_THROWS_AS(build_lattice({0, 0}, 1e-3, Window::square(100.0), 1000), Error);
  CHECK_THROWS_AS(build_lattice({0, 0}, -1.0, Window::square(2.0)), Error);
}
