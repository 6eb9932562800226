#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace holo {

enum class ErrorKind {
  OutOfDomain,
  EmptyComposition,
  DegenerateGenerator,
  Divergent,
  PreconditionViolation,
  IndexOutOfRange,
  NoExpansionFound,
  CertificationFailed,
  BudgetExhausted,
  TraceEscaped,
  UnknownExample,
  ParseError,
  ValidationError,
};

inline std::string_view error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::EmptyComposition: return "EmptyComposition";
    case ErrorKind::DegenerateGenerator: return "DegenerateGenerator";
    case ErrorKind::Divergent: return "Divergent";
    case ErrorKind::PreconditionViolation: return "PreconditionViolation";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::NoExpansionFound: return "NoExpansionFound";
    case ErrorKind::CertificationFailed: return "CertificationFailed";
    case ErrorKind::BudgetExhausted: return "BudgetExhausted";
    case ErrorKind::TraceEscaped: return "TraceEscaped";
    case ErrorKind::UnknownExample: return "UnknownExample";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string detail)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + detail),
        kind_(kind),
        detail_(std::move(detail)) {}

  ErrorKind kind() const { return kind_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

[[noreturn]] inline void fail(ErrorKind kind, std::string detail) {
  throw Error(kind, std::move(detail));
}

}  // namespace holo
