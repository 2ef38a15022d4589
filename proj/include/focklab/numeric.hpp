#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>

namespace focklab {

using Complex = std::complex<double>;
using ScalarField = std::function<Complex(Complex)>;

inline constexpr double kPi = 3.14159265358979323846;

// Pairwise (cascade) summation. Deterministic for a fixed input order.
template <typename T>
T pairwise_sum(std::span<const T> values) {
  const std::size_t n = values.size();
  if (n <= 16) {
    T acc{};
    for (const T& v : values) acc += v;
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

// "re+imi" with full precision, used in error messages.
std::string format_point(Complex z);

}  // namespace focklab
