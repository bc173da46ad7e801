#include "semiflow/error.hpp"

namespace semiflow {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::BranchCut: return "BranchCut";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::NotAGenerator: return "NotAGenerator";
    case ErrorCode::StepUnderflow: return "StepUnderflow";
    case ErrorCode::MaxStepsExceeded: return "MaxStepsExceeded";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::AmbiguousType: return "AmbiguousType";
    case ErrorCode::Divergent: return "Divergent";
    case ErrorCode::NotDilation: return "NotDilation";
    case ErrorCode::NotHyperbolic: return "NotHyperbolic";
    case ErrorCode::NotParabolic: return "NotParabolic";
    case ErrorCode::SlowConvergence: return "SlowConvergence";
    case ErrorCode::Inconsistent: return "Inconsistent";
    case ErrorCode::DegenerateSample: return "DegenerateSample";
  }
  return "Unknown";
}

}  // namespace semiflow
