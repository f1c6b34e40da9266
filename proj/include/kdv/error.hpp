#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kdv {

enum class ErrorCode {
  kEmptyInput,
  kMalformedRow,
  kDuplicateSession,
  kMixedUser,
  kEmptyList,
  kRosterMismatch,
  kShapeMismatch,
  kNoEligibleUsers,
  kSamePlatform,
  kOverlappingPlatforms,
  kKOutOfRange,
  kInvalidArgument,
  kIo,
};

std::string_view to_string(ErrorCode code);

// All library failures surface as this exception; `code()` lets callers
// (the CLI, tests) dispatch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyInput: return "EMPTY_INPUT";
    case ErrorCode::kMalformedRow: return "MALFORMED_ROW";
    case ErrorCode::kDuplicateSession: return "DUPLICATE_SESSION";
    case ErrorCode::kMixedUser: return "MIXED_USER";
    case ErrorCode::kEmptyList: return "EMPTY_LIST";
    case ErrorCode::kRosterMismatch: return "ROSTER_MISMATCH";
    case ErrorCode::kShapeMismatch: return "SHAPE_MISMATCH";
    case ErrorCode::kNoEligibleUsers: return "NO_ELIGIBLE_USERS";
    case ErrorCode::kSamePlatform: return "SAME_PLATFORM";
    case ErrorCode::kOverlappingPlatforms: return "OVERLAPPING_PLATFORMS";
    case ErrorCode::kKOutOfRange: return "K_OUT_OF_RANGE";
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kIo: return "IO_ERROR";
  }
  return "UNKNOWN";
}

}  // namespace kdv
