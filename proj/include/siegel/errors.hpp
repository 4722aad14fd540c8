#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace siegel {

enum class ErrorKind {
  PrecisionExhausted,
  UndecidableAtPrecision,
  ExactTie,
  DomainError,
  InvalidInput,
  SelectorFailed,
  CommutationViolated,
  SmallDivisorUnderflow,
  DegenerateLinearTerm,
};

std::string_view to_string(ErrorKind kind);

// CLI exit status for an error kind: 2 precision, 3 input, 4 domain.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        detail_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

  // Same kind, message prefixed with where it happened.
  Error with_context(const std::string& where) const {
    return Error(kind_, where + ": " + detail_);
  }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace siegel
