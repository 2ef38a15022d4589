#pragma once

#include <stdexcept>
#include <string>

namespace focklab {

// Failure categories. The C API maps these one-to-one onto fl_status values.
enum class ErrorCode {
  invalid_argument = 1,
  validation,
  capability,
  degree_cap,
  evaluation,
  window,
  capacity,
  convention,
  uncalibrated,
  numerical_consistency,
  refusal,
  io,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  // Message without the category prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace focklab
