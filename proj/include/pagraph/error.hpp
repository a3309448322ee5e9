#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pagraph {

enum class ErrorCode {
  NonPositiveSupport,
  NotNormalized,
  EmptyLaw,
  OverflowGuard,
  BetaNotZero,
  MismatchedLengths,
  NonPositiveMean,
  TruncationTooSmall,
  StepTooCoarse,
  UnboundedF,
  InsufficientBins,
  SeriesTooShort,
  DegenerateBinning,
  ParseError,
  RangeError,
  IoError,
  ReplicateFailed,
};

std::string_view to_string(ErrorCode code) noexcept;

// All library failures are reported through this one exception type; the
// code identifies the failure class, what() carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pagraph
