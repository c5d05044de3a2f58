#include "cpbandit/errors.hpp"

namespace cpbandit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateEnvironment: return "DegenerateEnvironment";
    case ErrorCode::OutOfRangeChangePoint: return "OutOfRangeChangePoint";
    case ErrorCode::NegativeSigma: return "NegativeSigma";
    case ErrorCode::OutOfRangeAction: return "OutOfRangeAction";
    case ErrorCode::SplitOutOfRange: return "SplitOutOfRange";
    case ErrorCode::SampleTooShort: return "SampleTooShort";
    case ErrorCode::BudgetTooSmall: return "BudgetTooSmall";
    case ErrorCode::EtaOutOfRange: return "EtaOutOfRange";
    case ErrorCode::BadExplorationBudget: return "BadExplorationBudget";
    case ErrorCode::NonpositiveSigma: return "NonpositiveSigma";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace cpbandit
