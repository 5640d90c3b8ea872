#include "shockzoom/error.hpp"

namespace shockzoom {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::EqualStates: return "EqualStates";
    case ErrorKind::NotLax: return "NotLax";
    case ErrorKind::NotOrdered: return "NotOrdered";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::Instability: return "Instability";
    case ErrorKind::NoBracket: return "NoBracket";
    case ErrorKind::MultipleRoots: return "MultipleRoots";
    case ErrorKind::TauTooLate: return "TauTooLate";
    case ErrorKind::NoCrossing: return "NoCrossing";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::NonPositive: return "NonPositive";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Config: return "Config";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace shockzoom
