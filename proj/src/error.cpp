#include "focklab/error.hpp"

namespace focklab {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::validation: return "validation error";
    case ErrorCode::capability: return "capability error";
    case ErrorCode::degree_cap: return "degree cap";
    case ErrorCode::evaluation: return "evaluation error";
    case ErrorCode::window: return "window error";
    case ErrorCode::capacity: return "capacity error";
    case ErrorCode::convention: return "convention error";
    case ErrorCode::uncalibrated: return "uncalibrated";
    case ErrorCode::numerical_consistency: return "numerical consistency error";
    case ErrorCode::refusal: return "refusal";
    case ErrorCode::io: return "i/o error";
  }
  return "unknown error";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

}  // namespace focklab

#include <cstdio>

#include "focklab/numeric.hpp"
#include "focklab/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace focklab {

std::string format_point(Complex z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

}  // namespace focklab

namespace focklab {

void set_worker_count(int workers) {
#ifdef _OPENMP
  if (workers > 0) omp_set_num_threads(workers);
#else
  (void)workers;
#endif
}

}  // namespace focklab
