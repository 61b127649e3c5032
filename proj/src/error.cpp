#include "phasespace/error.hpp"

#include <cmath>
#include <sstream>

namespace phasespace {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPowerOfTwo: return "NonPowerOfTwo";
    case ErrorCode::DegenerateInterval: return "DegenerateInterval";
    case ErrorCode::InvalidConstants: return "InvalidConstants";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::BoundaryLeak: return "BoundaryLeak";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::WeightMismatch: return "WeightMismatch";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::WrongKind: return "WrongKind";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

bool is_numerical_guard(ErrorCode code) {
  return code == ErrorCode::BoundaryLeak || code == ErrorCode::StepTooLarge;
}

namespace {

std::string compose(ErrorCode code, const std::string& message, double residual) {
  std::ostringstream out;
  out << to_string(code) << ": " << message;
  if (!std::isnan(residual)) {
    out.precision(6);
    out << " (residual " << residual << ")";
  }
  return out.str();
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, double residual)
    : std::runtime_error(compose(code, message, residual)), code_(code), residual_(residual) {}

}  // namespace phasespace
