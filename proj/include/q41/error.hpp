#ifndef Q41_ERROR_HPP
#define Q41_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace q41 {

enum class ErrorCode {
  MotionNotOrthogonal,
  ZeroRepresentative,
  OrderExhausted,
  DomainError,
  NotOnQuadric,
  ParameterOutOfRange,
  ParseError,
  UnknownIdentifier,
  ArityMismatch,
  NotSpacelike,
  NormalPlaneDegenerate,
  GaugeReferenceDegenerate,
  DegenerateTransform,
  NotWillmore,
  NotSWillmore,
  IntegrandSingular,
  InvalidConfig,
  IoError,
};

inline std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MotionNotOrthogonal: return "MotionNotOrthogonal";
    case ErrorCode::ZeroRepresentative: return "ZeroRepresentative";
    case ErrorCode::OrderExhausted: return "OrderExhausted";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NotOnQuadric: return "NotOnQuadric";
    case ErrorCode::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::NotSpacelike: return "NotSpacelike";
    case ErrorCode::NormalPlaneDegenerate: return "NormalPlaneDegenerate";
    case ErrorCode::GaugeReferenceDegenerate: return "GaugeReferenceDegenerate";
    case ErrorCode::DegenerateTransform: return "DegenerateTransform";
    case ErrorCode::NotWillmore: return "NotWillmore";
    case ErrorCode::NotSWillmore: return "NotSWillmore";
    case ErrorCode::IntegrandSingular: return "IntegrandSingular";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

/// Positions are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column)
      : Error(ErrorCode::ParseError, what), line_(line), column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace q41

#endif  // Q41_ERROR_HPP
