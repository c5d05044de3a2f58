#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cpbandit {

enum class ErrorCode {
  DegenerateEnvironment,
  OutOfRangeChangePoint,
  NegativeSigma,
  OutOfRangeAction,
  SplitOutOfRange,
  SampleTooShort,
  BudgetTooSmall,
  EtaOutOfRange,
  BadExplorationBudget,
  NonpositiveSigma,
  DomainError,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Every recoverable failure in the library is reported as an Error carrying
/// a machine-checkable code alongside the human-readable message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cpbandit
