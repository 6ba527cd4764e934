#include "orlicz_gauge/errors.hpp"

namespace orlicz {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSingularPoint:
      return "SingularPoint";
    case ErrorCode::kSingularTag:
      return "SingularTag";
    case ErrorCode::kOutOfDomain:
      return "OutOfDomain";
    case ErrorCode::kInvalidSpec:
      return "InvalidSpec";
    case ErrorCode::kValidation:
      return "Validation";
  }
  return "Unknown";
}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace orlicz
