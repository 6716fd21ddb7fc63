#include "qcc/errors.hpp"

namespace qcc {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptySubset: return "EmptySubset";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DegenerateBranch: return "DegenerateBranch";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::RegimeViolation: return "RegimeViolation";
    case ErrorCode::DeltaOutOfRange: return "DeltaOutOfRange";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::ZeroBlock: return "ZeroBlock";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace qcc
