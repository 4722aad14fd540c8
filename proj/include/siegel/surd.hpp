#pragma once

// Exact arithmetic in multi-quadratic fields Q(sqrt(d1), ..., sqrt(dk)).
//
// An element is a finite sum  sum_m c_m * sqrt(m)  over distinct squarefree
// radicands m >= 1 with rational coefficients.  The square roots of distinct
// squarefree integers are linearly independent over Q, so this form is
// canonical: zero tests are exact, and sign is decided by interval
// evaluation that is guaranteed to terminate for nonzero values.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "siegel/interval.hpp"

namespace siegel {

class SurdNumber {
 public:
  using Radicand = std::uint64_t;

  SurdNumber() = default;
  SurdNumber(long v);  // NOLINT(google-explicit-constructor)
  explicit SurdNumber(mpq_class q);

  // sqrt(n) for n >= 0; square factors are pulled out.
  static SurdNumber sqrt_of(std::uint64_t n);
  // (p + q*sqrt(d)) / r
  static SurdNumber quadratic(const mpz_class& p, const mpz_class& q, std::uint64_t d,
                              const mpz_class& r);

  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const;
  std::optional<mpq_class> as_rational() const;
  std::optional<mpz_class> as_integer() const;
  const std::map<Radicand, mpq_class>& terms() const { return terms_; }
  // Radicands carrying a nonzero coefficient, ascending.
  std::vector<Radicand> radicands() const;

  SurdNumber operator-() const;
  SurdNumber& operator+=(const SurdNumber& o);
  SurdNumber& operator-=(const SurdNumber& o);
  SurdNumber& operator*=(const SurdNumber& o);
  SurdNumber& operator/=(const SurdNumber& o);
  SurdNumber inverse() const;

  friend SurdNumber operator+(SurdNumber a, const SurdNumber& b) { return a += b; }
  friend SurdNumber operator-(SurdNumber a, const SurdNumber& b) { return a -= b; }
  friend SurdNumber operator*(SurdNumber a, const SurdNumber& b) { return a *= b; }
  friend SurdNumber operator/(SurdNumber a, const SurdNumber& b) { return a /= b; }
  friend bool operator==(const SurdNumber& a, const SurdNumber& b) {
    return a.terms_ == b.terms_;
  }

  // Exact sign in {-1, 0, +1}.
  int sign() const;
  SurdNumber abs() const { return sign() < 0 ? -*this : *this; }
  // Nearest integer; nullopt when the value is exactly a half-integer.
  std::optional<mpz_class> nearest_integer() const;
  mpz_class floor() const;

  // Outward-rounded enclosure at `prec` working bits.
  Interval enclose(mpfr_prec_t prec) const;
  std::string to_string() const;
  // Bits in the largest numerator/denominator; a rough size measure.
  std::size_t height_bits() const;

 private:
  void add_term(Radicand m, const mpq_class& c);
  std::map<Radicand, mpq_class> terms_;
};

// Factors n = s^2 * core with core squarefree.
std::pair<std::uint64_t, std::uint64_t> square_split(std::uint64_t n);
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

}  // namespace siegel
