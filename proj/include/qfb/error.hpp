#pragma once

#include <stdexcept>
#include <string>

namespace qfb {

enum class ErrorCode {
  InvalidDimension,
  InvariantViolation,
  ContractViolation,
  DegenerateChannel,
  DimensionMismatch,
  InvalidArgument,
  InsufficientData,
  MissingData,
  NotEigenbasis,
  Schema,
};

const char *to_string(ErrorCode code) noexcept;

// Single exception type for the library; `code()` tells callers which
// contract was broken.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace qfb
