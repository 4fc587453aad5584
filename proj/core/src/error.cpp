#include "pir/error.hpp"

namespace pir {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParameter: return "invalid-parameter";
    case ErrorCode::kInvalidInput: return "invalid-input";
    case ErrorCode::kNumericFailure: return "numeric-failure";
    case ErrorCode::kNotFound: return "not-found";
    case ErrorCode::kRejected: return "rejected";
    case ErrorCode::kIo: return "io-error";
  }
  return "unknown";
}

}  // namespace pir
