#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace blockopp {

enum class ErrorKind {
  DimensionMismatch,
  IndexOutOfRange,
  NotHermitian,
  NotFinite,
  NotPositiveDefinite,
  NotPositiveSemidefinite,
  SingularLeadingBlock,
  HypothesisViolated,
  NotCommuting,
  InvalidArgument,
  Parse,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::DimensionMismatch: return "DimensionMismatch";
  case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
  case ErrorKind::NotHermitian: return "NotHermitian";
  case ErrorKind::NotFinite: return "NotFinite";
  case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
  case ErrorKind::NotPositiveSemidefinite: return "NotPositiveSemidefinite";
  case ErrorKind::SingularLeadingBlock: return "SingularLeadingBlock";
  case ErrorKind::HypothesisViolated: return "HypothesisViolated";
  case ErrorKind::NotCommuting: return "NotCommuting";
  case ErrorKind::InvalidArgument: return "InvalidArgument";
  case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

//! Every precondition failure in the library is reported through this type.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

} // namespace blockopp
