#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nonmarkov {

enum class ErrorCode {
  DimensionMismatch,
  NonHermitian,
  RateNegative,
  StepOverflow,
  PositivityLoss,
  PulseOffGrid,
  IntervalNotOnGrid,
  NonUnitary,
  TruncationLeak,
  NonRealExpectation,
  AlphaOutOfRange,
  GridMismatch,
  OutsideRegime,
  InvalidArgument,
  Config,
};

std::string_view to_string(ErrorCode code);

/// Bad input: wrong dimensions, malformed configuration, violated preconditions.
/// The CLI maps these to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// The numerics left their domain of validity (blow-up, positivity loss,
/// negative rates). The CLI maps these to exit code 2.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nonmarkov
