#include "pagraph/error.hpp"

namespace pagraph {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonPositiveSupport: return "NonPositiveSupport";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::EmptyLaw: return "EmptyLaw";
    case ErrorCode::OverflowGuard: return "OverflowGuard";
    case ErrorCode::BetaNotZero: return "BetaNotZero";
    case ErrorCode::MismatchedLengths: return "MismatchedLengths";
    case ErrorCode::NonPositiveMean: return "NonPositiveMean";
    case ErrorCode::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorCode::StepTooCoarse: return "StepTooCoarse";
    case ErrorCode::UnboundedF: return "UnboundedF";
    case ErrorCode::InsufficientBins: return "InsufficientBins";
    case ErrorCode::SeriesTooShort: return "SeriesTooShort";
    case ErrorCode::DegenerateBinning: return "DegenerateBinning";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::RangeError: return "RangeError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ReplicateFailed: return "ReplicateFailed";
  }
  return "Unknown";
}

}  // namespace pagraph
