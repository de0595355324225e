#include "survpower/error.hpp"

#include <utility>

namespace survpower {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kDomain: return "numeric-domain";
    case ErrorCode::kInfiniteVariance: return "infinite-variance";
    case ErrorCode::kExistence: return "moment-existence";
    case ErrorCode::kDegenerate: return "degenerate";
    case ErrorCode::kConvergence: return "convergence";
    case ErrorCode::kSeparation: return "separation";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::string field)
    : std::runtime_error(message), code_(code), field_(std::move(field)) {}

namespace detail {

void fail(ErrorCode code, const std::string& message, std::string field) {
  throw Error(code, message, std::move(field));
}

}  // namespace detail
}  // namespace survpower
