#include "siegel/errors.hpp"

namespace siegel {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::UndecidableAtPrecision: return "UndecidableAtPrecision";
    case ErrorKind::ExactTie: return "ExactTie";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::SelectorFailed: return "SelectorFailed";
    case ErrorKind::CommutationViolated: return "CommutationViolated";
    case ErrorKind::SmallDivisorUnderflow: return "SmallDivisorUnderflow";
    case ErrorKind::DegenerateLinearTerm: return "DegenerateLinearTerm";
  }
  return "Unknown";
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::PrecisionExhausted:
    case ErrorKind::UndecidableAtPrecision:
      return 2;
    case ErrorKind::InvalidInput:
      return 3;
    default:
      return 4;
  }
}

}  // namespace siegel
