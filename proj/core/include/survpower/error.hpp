#pragma once

#include <stdexcept>
#include <string>

namespace survpower {

enum class ErrorCode {
  kValidation,        // malformed or out-of-range input
  kDomain,            // argument outside the mathematical domain
  kInfiniteVariance,  // Beta shapes a <= 1 or b <= 1
  kExistence,         // a requested moment does not exist
  kDegenerate,        // tau0 = 0, empty arm, no events, ...
  kConvergence,       // iterative solver failed
  kSeparation,        // logistic or Cox likelihood has no finite maximizer
};

/// Stable machine-readable name, e.g. "infinite-variance".
const char* to_string(ErrorCode code) noexcept;

/// Exception carrying a code and, when known, the offending input field.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string field = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& field() const noexcept { return field_; }

 private:
  ErrorCode code_;
  std::string field_;
};

namespace detail {

[[noreturn]] void fail(ErrorCode code, const std::string& message, std::string field = {});

inline void require_open_unit(double value, const char* field) {
  if (!(value > 0.0 && value < 1.0)) {
    fail(ErrorCode::kDomain, std::string(field) + " must lie in (0, 1)", field);
  }
}

}  // namespace detail
}  // namespace survpower
