#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace undernewton {

enum class ErrorCode {
  InvalidInput,
  RankDeficient,
  LPInfeasible,
  LPUnbounded,
  CycleLimit,
  SizeLimit,
  DomainError,
  ZeroGradient,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::LPInfeasible: return "LPInfeasible";
    case ErrorCode::LPUnbounded: return "LPUnbounded";
    case ErrorCode::CycleLimit: return "CycleLimit";
    case ErrorCode::SizeLimit: return "SizeLimit";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::ZeroGradient: return "ZeroGradient";
  }
  return "Unknown";
}

/// Exception type for every recoverable failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace undernewton
