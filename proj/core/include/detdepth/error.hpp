#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace detdepth {

enum class ErrorCode {
  kInvalidParams,
  kCommitmentNotInBasis,
  kHorizonExceeded,
  kTooManyCommitments,
  kCyclicDependency,
  kLengthMismatch,
  kTooLarge,
  kTooManyRotations,
  kCycleDetected,
  kStateSpaceExceeded,
  kTooManyVariables,
  kMalformedPrefix,
  kNotAChain,
  kEventNotFound,
  kParseError,
  kUnknownSubcommand,
  kIoFailure,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures surface as this exception; `code()` identifies the
// contract violation.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidParams: return "InvalidParams";
    case ErrorCode::kCommitmentNotInBasis: return "CommitmentNotInBasis";
    case ErrorCode::kHorizonExceeded: return "HorizonExceeded";
    case ErrorCode::kTooManyCommitments: return "TooManyCommitments";
    case ErrorCode::kCyclicDependency: return "CyclicDependency";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kTooManyRotations: return "TooManyRotations";
    case ErrorCode::kCycleDetected: return "CycleDetected";
    case ErrorCode::kStateSpaceExceeded: return "StateSpaceExceeded";
    case ErrorCode::kTooManyVariables: return "TooManyVariables";
    case ErrorCode::kMalformedPrefix: return "MalformedPrefix";
    case ErrorCode::kNotAChain: return "NotAChain";
    case ErrorCode::kEventNotFound: return "EventNotFound";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kUnknownSubcommand: return "UnknownSubcommand";
    case ErrorCode::kIoFailure: return "IoFailure";
  }
  return "Unknown";
}

}  // namespace detdepth
