#include "consensus/error.hpp"

namespace consensus {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::ConflictingDuplicateEdge: return "ConflictingDuplicateEdge";
    case ErrorCode::ClassGap: return "ClassGap";
    case ErrorCode::TooManyClasses: return "TooManyClasses";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::GraphDisconnected: return "GraphDisconnected";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::DecayRateTooLarge: return "DecayRateTooLarge";
    case ErrorCode::UnknownClass: return "UnknownClass";
    case ErrorCode::BadSize: return "BadSize";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::SignalViolatesBound: return "SignalViolatesBound";
    case ErrorCode::NoSignChange: return "NoSignChange";
  }
  return "Unknown";
}

}  // namespace consensus
