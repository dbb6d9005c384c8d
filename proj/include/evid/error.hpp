#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace evid {

enum class ErrorKind {
  ConvergenceFailure,
  DimensionTooSmall,
  DegenerateEigenvalue,
  NegativeWeight,
  MatchingFailure,
  PoleEvaluation,
  ParseError,
  NotHermitian,
  DimensionMismatch,
  InvalidSpec,
};

constexpr std::string_view kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorKind::DegenerateEigenvalue: return "DegenerateEigenvalue";
    case ErrorKind::NegativeWeight: return "NegativeWeight";
    case ErrorKind::MatchingFailure: return "MatchingFailure";
    case ErrorKind::PoleEvaluation: return "PoleEvaluation";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
  }
  return "Unknown";
}

// Every failure raised by the library carries a kind so that callers (the
// CLI in particular) can map it without parsing the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace evid
