#pragma once

// MPFR-backed floating point values and outward-rounded intervals.

#include <mpfr.h>

#include <gmpxx.h>

#include <string>

namespace siegel {

class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t prec = 128);
  BigFloat(const BigFloat& other);
  BigFloat(BigFloat&& other) noexcept;
  BigFloat& operator=(const BigFloat& other);
  BigFloat& operator=(BigFloat&& other) noexcept;
  ~BigFloat();

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

  bool is_inf() const { return mpfr_inf_p(value_) != 0; }
  bool is_nan() const { return mpfr_nan_p(value_) != 0; }
  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }

  double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(value_, rnd); }
  long double to_long_double(mpfr_rnd_t rnd = MPFR_RNDN) const {
    return mpfr_get_ld(value_, rnd);
  }
  // Scientific notation with `digits` significant digits, rounded as asked.
  std::string to_string(int digits, mpfr_rnd_t rnd = MPFR_RNDN) const;

 private:
  mpfr_t value_;
  bool live_ = false;
};

int compare(const BigFloat& a, const BigFloat& b);

// Closed interval [lo, hi]; endpoints may be infinite while an enclosure is
// still too coarse, never NaN.
class Interval {
 public:
  explicit Interval(mpfr_prec_t prec = 128);
  Interval(BigFloat lo, BigFloat hi);

  static Interval point_si(long v, mpfr_prec_t prec);
  static Interval from_rational(const mpq_class& q, mpfr_prec_t prec);
  static Interval from_integer(const mpz_class& z, mpfr_prec_t prec);
  static Interval from_double(double v, mpfr_prec_t prec);
  static Interval whole(mpfr_prec_t prec);
  static Interval pi(mpfr_prec_t prec);
  static Interval sqrt_of(unsigned long n, mpfr_prec_t prec);

  const BigFloat& lo() const { return lo_; }
  const BigFloat& hi() const { return hi_; }
  mpfr_prec_t precision() const { return lo_.precision(); }

  bool is_bounded() const { return !lo_.is_inf() && !hi_.is_inf(); }
  bool contains_zero() const { return lo_.sign() <= 0 && hi_.sign() >= 0; }
  bool is_point() const { return mpfr_equal_p(lo_.get(), hi_.get()) != 0; }
  // +1 if lo > 0, -1 if hi < 0, 0 if the point zero, otherwise 2 (unknown).
  int certain_sign() const;

  BigFloat width() const;  // rounded up
  BigFloat mid() const;
  double mid_double() const;

 private:
  BigFloat lo_;
  BigFloat hi_;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval mul_si(const Interval& a, long k);
Interval abs(const Interval& a);
Interval log(const Interval& a);
Interval exp(const Interval& a);
Interval sqrt(const Interval& a);
Interval min(const Interval& a, const Interval& b);
Interval max(const Interval& a, const Interval& b);
// Distance to the nearest integer, as an enclosure.
Interval dist_to_integer(const Interval& a);
bool contains_integer(const Interval& a);
bool contains_half_integer(const Interval& a);
// Hull of both enclosures.
Interval hull(const Interval& a, const Interval& b);
// Rounding all endpoints outward onto `prec` bits.
Interval with_precision(const Interval& a, mpfr_prec_t prec);

}  // namespace siegel
