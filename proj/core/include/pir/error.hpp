#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pir {

enum class ErrorCode {
  kInvalidParameter,
  kInvalidInput,
  kNumericFailure,
  kNotFound,
  kRejected,
  kIo,
};

std::string_view to_string(ErrorCode code);

// All library failures are reported as pir::Error; the code maps onto the
// error categories of the public interfaces (CLI exit status, HTTP status).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pir
