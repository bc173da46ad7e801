#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace semiflow {

enum class ErrorCode {
  SyntaxError,
  DivisionByZero,
  BranchCut,
  Overflow,
  DomainError,
  InvalidParameter,
  NotAGenerator,
  StepUnderflow,
  MaxStepsExceeded,
  NoConvergence,
  AmbiguousType,
  Divergent,
  NotDilation,
  NotHyperbolic,
  NotParabolic,
  SlowConvergence,
  Inconsistent,
  DegenerateSample,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Syntax error with a 0-based byte offset into the source text.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& message)
      : Error(ErrorCode::SyntaxError, message), offset_(offset) {}

  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace semiflow
