#include "latentsplit/error.hpp"

namespace latentsplit {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::UnknownLabel: return "UnknownLabel";
    case ErrorKind::LayoutMismatch: return "LayoutMismatch";
    case ErrorKind::InvalidOperator: return "InvalidOperator";
    case ErrorKind::InvalidNetwork: return "InvalidNetwork";
    case ErrorKind::ModelMismatch: return "ModelMismatch";
    case ErrorKind::UnknownParty: return "UnknownParty";
    case ErrorKind::NotAnEdge: return "NotAnEdge";
    case ErrorKind::ZeroDivisor: return "ZeroDivisor";
    case ErrorKind::ParamOutOfRange: return "ParamOutOfRange";
    case ErrorKind::WiringInconsistent: return "WiringInconsistent";
    case ErrorKind::UnknownBehaviorReference: return "UnknownBehaviorReference";
    case ErrorKind::NumericallyAmbiguous: return "NumericallyAmbiguous";
    case ErrorKind::NoTransition: return "NoTransition";
    case ErrorKind::UnknownAtomReference: return "UnknownAtomReference";
    case ErrorKind::CardinalityMismatch: return "CardinalityMismatch";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace latentsplit
