#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace benign {

enum class ErrorCode {
  Validation,
  RankDeficient,
  NotInterpolable,
  IterationLimit,
  NoConvergence,
  NumericalBreakdown,
  BudgetExceeded,
  DomainError,
  Io,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Validation: return "Validation";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::NotInterpolable: return "NotInterpolable";
    case ErrorCode::IterationLimit: return "IterationLimit";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

// Process exit status used by the CLI for each category; 1 is reserved for
// unexpected failures.
constexpr int exit_status(ErrorCode code) {
  return 2 + static_cast<int>(code);
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorCode::Validation, message);
}

}  // namespace benign
