#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hrtlab {

enum class ErrorKind {
  DuplicatePoints,
  Collinear,
  BadStep,
  ZeroWindow,
  OffGridShift,
  GridMismatch,
  NoDistinguishedPoint,
  UnsupportedShift,
  ZeroDirection,
  PrecisionExhausted,
  Overflow,
  ParseError,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DuplicatePoints: return "DuplicatePoints";
    case ErrorKind::Collinear: return "Collinear";
    case ErrorKind::BadStep: return "BadStep";
    case ErrorKind::ZeroWindow: return "ZeroWindow";
    case ErrorKind::OffGridShift: return "OffGridShift";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::NoDistinguishedPoint: return "NoDistinguishedPoint";
    case ErrorKind::UnsupportedShift: return "UnsupportedShift";
    case ErrorKind::ZeroDirection: return "ZeroDirection";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the ErrorKind cases so
/// callers (the CLI in particular) can report the case by name.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hrtlab
