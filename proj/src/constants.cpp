#include "siegel/constants.hpp"

#include "siegel/errors.hpp"

namespace siegel {

ConstantsConfig ConstantsConfig::make(const RealScalar& c_univ,
                                      const std::optional<RealScalar>& c_prime,
                                      const std::optional<RealScalar>& c_radius,
                                      const PrecisionPolicy& policy) {
  if (certified_sign(c_univ, policy) < 0) {
    throw Error(ErrorKind::InvalidInput, "c_univ must be nonnegative");
  }
  RealScalar prime = c_prime ? *c_prime : 4L * (c_univ + RealScalar::integer(1));
  if (certified_sign(prime, policy) < 0) {
    throw Error(ErrorKind::InvalidInput, "c_prime must be nonnegative");
  }
  RealScalar radius = c_radius ? *c_radius : RealScalar::integer(1);
  if (certified_sign(radius, policy) <= 0) {
    throw Error(ErrorKind::InvalidInput, "c_radius must be positive");
  }
  return ConstantsConfig{c_univ, prime, radius};
}

}  // namespace siegel
