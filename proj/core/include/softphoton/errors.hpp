#pragma once

#include <stdexcept>
#include <string>

namespace softphoton {

enum class ErrorCode {
  GridTooCoarse,
  NonFiniteIntegrand,
  ZeroMomentum,
  DegenerateDenominator,
  MetricMismatch,
  IndexMismatch,
  NonPhysicalVelocity,
  NonPositiveCutoff,
  InvalidArgument,
};

const char* to_string(ErrorCode code) noexcept;

// Every failure raised by the core library carries one of the codes above so
// callers (the CLI in particular) can map it to an exit status.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(ErrorCode code, const std::string& detail);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace softphoton
