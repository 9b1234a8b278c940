#include "sipg/error.hpp"

namespace sipg {

const char* toString(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Schema: return "schema";
    case ErrorCode::Invariant: return "invariant";
    case ErrorCode::Io: return "io";
    case ErrorCode::Infeasible: return "infeasible";
    case ErrorCode::Unbounded: return "unbounded";
    case ErrorCode::NegativeStock: return "negative-stock";
    case ErrorCode::MissingContribution: return "missing-contribution";
    case ErrorCode::Protocol: return "protocol";
    case ErrorCode::VersionMismatch: return "version-mismatch";
    case ErrorCode::RoleClaimed: return "role-claimed";
    case ErrorCode::UndeclaredAttribute: return "undeclared-attribute";
    case ErrorCode::GateClosed: return "gate-closed";
    case ErrorCode::StaleUpdate: return "stale-update";
    case ErrorCode::OutOfOrder: return "out-of-order";
    case ErrorCode::SessionClosed: return "session-closed";
    case ErrorCode::TimeRegression: return "time-regression";
    case ErrorCode::Malformed: return "malformed";
    case ErrorCode::State: return "state";
  }
  return "unknown";
}

}  // namespace sipg
