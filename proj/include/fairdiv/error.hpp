#pragma once

#include <stdexcept>
#include <string>

namespace fairdiv {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  ParseError,
  BudgetExceeded,
  NoContainingSet,
  InvalidProfile,
  InvalidProfileKind,
  MalformedOrdering,
  InconsistentScans,
  NoPermutationWorks,
  UnsupportedDimension,
  UnknownSession,
  WrongTurn,
  InvalidRoom,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fairdiv
