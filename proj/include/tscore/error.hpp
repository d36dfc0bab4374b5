#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tscore {

enum class ErrorCode {
  NotPositiveDefinite,
  DomainError,
  DimensionMismatch,
  DegreesOfFreedom,
  ZeroDenominator,
  NonFinite,
  NotConverged,
  SingularInformation,
  ConfigError,
  InputError,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` identifies the failure.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DegreesOfFreedom: return "DegreesOfFreedomError";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::SingularInformation: return "SingularInformation";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::InputError: return "InputError";
  }
  return "Unknown";
}

}  // namespace tscore
