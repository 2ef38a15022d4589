#pragma once

#include <cstddef>
#include <exception>
#include <mutex>

namespace focklab {

// Runs body(i) for i in [0, n), in parallel when OpenMP is enabled. The first
// exception thrown by any iteration is rethrown on the calling thread.
template <typename Body>
void parallel_for(std::size_t n, Body&& body) {
  std::exception_ptr error;
  std::mutex guard;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

// Sets the worker count used by parallel_for; 0 leaves the default.
void set_worker_count(int workers);

}  // namespace focklab
