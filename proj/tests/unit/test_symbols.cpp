#include <cmath>

#include "doctest.h"
#include "focklab/error.hpp"
#include "focklab/oscillation.hpp"
#include "focklab/symbols.hpp"
#include "generators.hpp"

using namespace focklab;

TEST_CASE("every family builds and its metadata re-derives on probes") {
  gen::Source src(31);
  std::vector<Complex> probes;
  for (int i = 0; i < 24; ++i) probes.push_back(src.point_in_box(4.0));
  for (const auto& id : symbol_families()) {
    SymbolParams p;
    p.coeffs = {{1, 0}, {0, 2}, {0.5, 0}};
    const auto s = make_symbol(id, p);
    CAPTURE(id);
    CHECK(s.name == id);
    const auto check = check_symbol_metadata(s, probes);
    CHECK(check.pass());
  }
}

TEST_CASE("closed-form dbar values") {
  const auto c = make_symbol("conj-linear");
  CHECK(std::abs(c.dbar({2, 3}) - 1.0) <= 1e-15);
  const auto h = make_symbol("holo-poly", SymbolParams{{{1, 0}, {2, 0}}});
  CHECK(h.holomorphic);
  CHECK(std::abs(h.dbar({1, 1})) == 0.0);
  const auto z = make_symbol("zero");
  CHECK(z.f({5, 5}) == Complex(0, 0));
}

TEST_CASE("compact families vanish outside their radius") {
  SymbolParams p;
  p.radius = 1.5;
  for (const char* id : {"bump", "step"}) {
    const auto s = make_symbol(id, p);
    CHECK(s.support == SupportHint::compact);
    CHECK(s.f({1.6, 0}) == Complex(0, 0));
    CHECK(std::abs(s.f({0.2, 0.1})) > 0.0);
  }
}

TEST_CASE("combinators") {
  gen::Source src(32);
  const auto c = make_symbol("conj-linear");
  const auto s = sum(scaled(c, {0, 2}), shifted(c, {1, 1}));
  for (int i = 0; i < 10; ++i) {
    const Complex z = src.point_in_box(3.0);
    CHECK(std::abs(s(z) - (Complex(0, 2) * std::conj(z) + std::conj(z - Complex(1, 1)))) <= 1e-14);
    CHECK(std::abs(s.dbar(z) - Complex(1, 2)) <= 1e-14);
  }
}

TEST_CASE("unknown family is rejected") { CHECK_THROWS_AS(make_symbol("nope"), Error); }
