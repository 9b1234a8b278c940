#pragma once

#include <stdexcept>
#include <string>

namespace sipg {

enum class ErrorCode {
  InvalidArgument,
  Parse,
  Schema,
  Invariant,
  Io,
  Infeasible,
  Unbounded,
  NegativeStock,
  MissingContribution,
  Protocol,
  VersionMismatch,
  RoleClaimed,
  UndeclaredAttribute,
  GateClosed,
  StaleUpdate,
  OutOfOrder,
  SessionClosed,
  TimeRegression,
  Malformed,
  State,
};

const char* toString(ErrorCode code);

/// Library-wide exception. The C API maps each code onto a status value.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sipg
