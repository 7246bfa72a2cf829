#include "softphoton/errors.hpp"

namespace softphoton {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::NonFiniteIntegrand: return "NonFiniteIntegrand";
    case ErrorCode::ZeroMomentum: return "ZeroMomentum";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::MetricMismatch: return "MetricMismatch";
    case ErrorCode::IndexMismatch: return "IndexMismatch";
    case ErrorCode::NonPhysicalVelocity: return "NonPhysicalVelocity";
    case ErrorCode::NonPositiveCutoff: return "NonPositiveCutoff";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

NumericalError::NumericalError(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace softphoton
