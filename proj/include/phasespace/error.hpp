#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace phasespace {

enum class ErrorCode {
  NonPowerOfTwo,
  DegenerateInterval,
  InvalidConstants,
  NotNormalized,
  NotHermitian,
  BoundaryLeak,
  InvalidSpec,
  WeightMismatch,
  GridMismatch,
  WrongKind,
  InvalidConfig,
  StepTooLarge,
  ParseError,
};

std::string_view to_string(ErrorCode code);

// BoundaryLeak and StepTooLarge: the input was well formed but the numerics
// cannot be trusted on this grid / step.
bool is_numerical_guard(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        double residual = std::numeric_limits<double>::quiet_NaN());

  ErrorCode code() const noexcept { return code_; }
  // Size of the violation that triggered the error, NaN when not applicable.
  double residual() const noexcept { return residual_; }

 private:
  ErrorCode code_;
  double residual_;
};

}  // namespace phasespace
