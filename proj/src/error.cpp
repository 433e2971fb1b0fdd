#include "kkd/error.hpp"

namespace kkd {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::DegenerateState: return "DegenerateState";
    case ErrorKind::AxisState: return "AxisState";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::NonLipschitz: return "NonLipschitz";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::CFLViolation: return "CFLViolation";
    case ErrorKind::StabilityViolation: return "StabilityViolation";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::TestFunctionSupport: return "TestFunctionSupport";
    case ErrorKind::ShockFormed: return "ShockFormed";
    case ErrorKind::RootBracketFailure: return "RootBracketFailure";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::IOError: return "IOError";
  }
  return "Error";
}

}  // namespace kkd
