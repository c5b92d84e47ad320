#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace consensus {

enum class ErrorCode {
  InvalidArgument,
  ParseError,
  NonPositiveWeight,
  SelfLoop,
  ConflictingDuplicateEdge,
  ClassGap,
  TooManyClasses,
  NotSymmetric,
  DimensionMismatch,
  GraphDisconnected,
  ConvergenceFailure,
  DecayRateTooLarge,
  UnknownClass,
  BadSize,
  NoConvergence,
  StepTooLarge,
  SignalViolatesBound,
  NoSignChange,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace consensus
