#pragma once

#include <stdexcept>
#include <string>

namespace latentsplit {

enum class ErrorKind {
  UnknownLabel,
  LayoutMismatch,
  InvalidOperator,
  InvalidNetwork,
  ModelMismatch,
  UnknownParty,
  NotAnEdge,
  ZeroDivisor,
  ParamOutOfRange,
  WiringInconsistent,
  UnknownBehaviorReference,
  NumericallyAmbiguous,
  NoTransition,
  UnknownAtomReference,
  CardinalityMismatch,
  PreconditionViolated,
  ParseError,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so
/// callers (and the CLI exit-code logic) can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace latentsplit
