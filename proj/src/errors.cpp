#include "nonmarkov/errors.hpp"

namespace nonmarkov {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonHermitian: return "NonHermitian";
    case ErrorCode::RateNegative: return "RateNegative";
    case ErrorCode::StepOverflow: return "StepOverflow";
    case ErrorCode::PositivityLoss: return "PositivityLoss";
    case ErrorCode::PulseOffGrid: return "PulseOffGrid";
    case ErrorCode::IntervalNotOnGrid: return "IntervalNotOnGrid";
    case ErrorCode::NonUnitary: return "NonUnitary";
    case ErrorCode::TruncationLeak: return "TruncationLeak";
    case ErrorCode::NonRealExpectation: return "NonRealExpectation";
    case ErrorCode::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::OutsideRegime: return "OutsideRegime";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Config: return "Config";
  }
  return "Unknown";
}

ValidationError::ValidationError(ErrorCode code, const std::string& what)
    : std::invalid_argument(std::string(to_string(code)) + ": " + what), code_(code) {}

NumericalError::NumericalError(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace nonmarkov
