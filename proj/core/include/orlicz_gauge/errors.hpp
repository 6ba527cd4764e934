#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace orlicz {

enum class ErrorCode {
  kSingularPoint,
  kSingularTag,
  kOutOfDomain,
  kInvalidSpec,
  kValidation,
};

std::string_view to_string(ErrorCode code);

/// Contract violation raised by the library. Numerical outcomes such as
/// divergence or budget exhaustion are reported through status fields.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace orlicz
