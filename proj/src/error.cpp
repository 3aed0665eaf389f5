#include "fairdiv/error.hpp"

namespace fairdiv {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NoContainingSet: return "NoContainingSet";
    case ErrorCode::InvalidProfile: return "InvalidProfile";
    case ErrorCode::InvalidProfileKind: return "InvalidProfileKind";
    case ErrorCode::MalformedOrdering: return "MalformedOrdering";
    case ErrorCode::InconsistentScans: return "InconsistentScans";
    case ErrorCode::NoPermutationWorks: return "NoPermutationWorks";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::UnknownSession: return "UnknownSession";
    case ErrorCode::WrongTurn: return "WrongTurn";
    case ErrorCode::InvalidRoom: return "InvalidRoom";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

}  // namespace fairdiv
