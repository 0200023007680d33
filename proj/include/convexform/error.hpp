#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace convexform {

enum class ErrorCode {
  // morse_spec
  ForbiddenExtremum,
  ZeroCritical,
  GraphDegree,
  EulerMismatch,
  Disconnected,
  DegenerateValues,
  UnknownId,
  DuplicateId,
  PairingError,
  // local_models
  DomainError,
  SignMismatch,
  SlopeTooSmall,
  // assembly
  TraceSignError,
  // verification / tracing
  OutOfDomain,
  NotASaddle,
  // gauss_degree
  GenusMismatch,
  // generic
  MalformedInput,
  InvariantViolation,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying one of the library error codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace convexform
