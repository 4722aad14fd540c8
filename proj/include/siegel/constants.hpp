#pragma once

#include <optional>

#include "siegel/real.hpp"

namespace siegel {

// The unquantified constants of the radius and height estimates.  These are
// configuration: nothing in the library claims a true value for them.
struct ConstantsConfig {
  RealScalar c_univ;   // additive constant in t(alpha) = log(1/alpha)/(2 pi) + c_univ
  RealScalar c_prime;  // additive constant of the height bound
  RealScalar c_radius; // prefactor of the Siegel radius bound

  // c_prime defaults to 4 (c_univ + 1); c_radius to 1.
  static ConstantsConfig make(const RealScalar& c_univ,
                              const std::optional<RealScalar>& c_prime = std::nullopt,
                              const std::optional<RealScalar>& c_radius = std::nullopt,
                              const PrecisionPolicy& policy = {});
  static ConstantsConfig defaults() { return make(RealScalar::integer(0)); }
};

}  // namespace siegel
