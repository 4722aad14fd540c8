#include "siegel/interval.hpp"

#include <algorithm>
#include <utility>

#include "siegel/errors.hpp"

namespace siegel {

BigFloat::BigFloat(mpfr_prec_t prec) {
  mpfr_init2(value_, prec);
  mpfr_set_zero(value_, 1);
  live_ = true;
}

BigFloat::BigFloat(const BigFloat& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
  live_ = true;
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
  // Steal the limbs; leave `other` as a valid 2-bit zero.
  *value_ = *other.value_;
  live_ = true;
  mpfr_init2(other.value_, MPFR_PREC_MIN);
  mpfr_set_zero(other.value_, 1);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
  if (this != &other) mpfr_swap(value_, other.value_);
  return *this;
}

BigFloat::~BigFloat() {
  if (live_) mpfr_clear(value_);
}

std::string BigFloat::to_string(int digits, mpfr_rnd_t rnd) const {
  if (is_inf()) return sign() > 0 ? "inf" : "-inf";
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*R*e", std::max(digits - 1, 0), rnd, value_);
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

int compare(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.get(), b.get()); }

namespace {

mpfr_prec_t join(const Interval& a, const Interval& b) {
  return std::max(a.precision(), b.precision());
}

// NaN endpoints only arise from 0*inf or inf/inf; both are resolved toward
// the conservative side of the enclosure.
void fix_lower(BigFloat& x, bool zero_ok) {
  if (x.is_nan()) {
    if (zero_ok) mpfr_set_zero(x.get(), 1);
    else mpfr_set_inf(x.get(), -1);
  }
}
void fix_upper(BigFloat& x, bool zero_ok) {
  if (x.is_nan()) {
    if (zero_ok) mpfr_set_zero(x.get(), 1);
    else mpfr_set_inf(x.get(), 1);
  }
}

BigFloat endpoint_dist(const BigFloat& x, mpfr_rnd_t rnd) {
  mpfr_prec_t p = x.precision();
  BigFloat n(p + 2), d(p);
  mpfr_round(n.get(), x.get());
  mpfr_sub(d.get(), x.get(), n.get(), rnd == MPFR_RNDU ? MPFR_RNDA : MPFR_RNDZ);
  mpfr_abs(d.get(), d.get(), MPFR_RNDN);
  return d;
}

}  // namespace

Interval::Interval(mpfr_prec_t prec) : lo_(prec), hi_(prec) {}

Interval::Interval(BigFloat lo, BigFloat hi) : lo_(std::move(lo)), hi_(std::move(hi)) {}

Interval Interval::point_si(long v, mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_set_si(r.lo_.get(), v, MPFR_RNDD);
  mpfr_set_si(r.hi_.get(), v, MPFR_RNDU);
  return r;
}

Interval Interval::from_rational(const mpq_class& q, mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_set_q(r.lo_.get(), q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_.get(), q.get_mpq_t(), MPFR_RNDU);
  return r;
}

Interval Interval::from_integer(const mpz_class& z, mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_set_z(r.lo_.get(), z.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(r.hi_.get(), z.get_mpz_t(), MPFR_RNDU);
  return r;
}

Interval Interval::from_double(double v, mpfr_prec_t prec) {
  Interval r(std::max<mpfr_prec_t>(prec, 53));
  mpfr_set_d(r.lo_.get(), v, MPFR_RNDD);
  mpfr_set_d(r.hi_.get(), v, MPFR_RNDU);
  return r;
}

Interval Interval::whole(mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_set_inf(r.lo_.get(), -1);
  mpfr_set_inf(r.hi_.get(), 1);
  return r;
}

Interval Interval::pi(mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_const_pi(r.lo_.get(), MPFR_RNDD);
  mpfr_const_pi(r.hi_.get(), MPFR_RNDU);
  return r;
}

Interval Interval::sqrt_of(unsigned long n, mpfr_prec_t prec) {
  Interval r(prec);
  mpfr_sqrt_ui(r.lo_.get(), n, MPFR_RNDD);
  mpfr_sqrt_ui(r.hi_.get(), n, MPFR_RNDU);
  return r;
}

int Interval::certain_sign() const {
  if (lo_.sign() > 0) return 1;
  if (hi_.sign() < 0) return -1;
  if (lo_.is_zero() && hi_.is_zero()) return 0;
  return 2;
}

BigFloat Interval::width() const {
  BigFloat w(precision());
  mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
  return w;
}

BigFloat Interval::mid() const {
  BigFloat m(precision() + 1);
  mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
  mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
  return m;
}

double Interval::mid_double() const {
  if (!is_bounded()) {
    if (lo_.is_inf() && hi_.is_inf()) return 0.0;
    return lo_.is_inf() ? hi_.to_double() : lo_.to_double();
  }
  return mid().to_double();
}

Interval operator+(const Interval& a, const Interval& b) {
  Interval r(join(a, b));
  BigFloat lo(r.precision()), hi(r.precision());
  mpfr_add(lo.get(), a.lo().get(), b.lo().get(), MPFR_RNDD);
  mpfr_add(hi.get(), a.hi().get(), b.hi().get(), MPFR_RNDU);
  fix_lower(lo, false);
  fix_upper(hi, false);
  return Interval(std::move(lo), std::move(hi));
}

Interval operator-(const Interval& a) {
  BigFloat lo(a.precision()), hi(a.precision());
  mpfr_neg(lo.get(), a.hi().get(), MPFR_RNDD);
  mpfr_neg(hi.get(), a.lo().get(), MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

Interval operator-(const Interval& a, const Interval& b) { return a + (-b); }

Interval operator*(const Interval& a, const Interval& b) {
  mpfr_prec_t p = join(a, b);
  const BigFloat* xs[2] = {&a.lo(), &a.hi()};
  const BigFloat* ys[2] = {&b.lo(), &b.hi()};
  BigFloat lo(p), hi(p), t(p);
  mpfr_set_inf(lo.get(), 1);
  mpfr_set_inf(hi.get(), -1);
  for (const BigFloat* x : xs) {
    for (const BigFloat* y : ys) {
      mpfr_mul(t.get(), x->get(), y->get(), MPFR_RNDD);
      fix_lower(t, true);
      if (compare(t, lo) < 0) lo = t;
      mpfr_mul(t.get(), x->get(), y->get(), MPFR_RNDU);
      fix_upper(t, true);
      if (compare(t, hi) > 0) hi = t;
    }
  }
  return Interval(std::move(lo), std::move(hi));
}

Interval mul_si(const Interval& a, long k) {
  BigFloat lo(a.precision()), hi(a.precision());
  if (k >= 0) {
    mpfr_mul_si(lo.get(), a.lo().get(), k, MPFR_RNDD);
    mpfr_mul_si(hi.get(), a.hi().get(), k, MPFR_RNDU);
  } else {
    mpfr_mul_si(lo.get(), a.hi().get(), k, MPFR_RNDD);
    mpfr_mul_si(hi.get(), a.lo().get(), k, MPFR_RNDU);
  }
  fix_lower(lo, true);
  fix_upper(hi, true);
  return Interval(std::move(lo), std::move(hi));
}

Interval operator/(const Interval& a, const Interval& b) {
  mpfr_prec_t p = join(a, b);
  if (b.lo().is_zero() && b.hi().is_zero()) {
    throw Error(ErrorKind::DomainError, "division by exact zero");
  }
  if (b.contains_zero()) return Interval::whole(p);
  const BigFloat* xs[2] = {&a.lo(), &a.hi()};
  const BigFloat* ys[2] = {&b.lo(), &b.hi()};
  BigFloat lo(p), hi(p), t(p);
  mpfr_set_inf(lo.get(), 1);
  mpfr_set_inf(hi.get(), -1);
  for (const BigFloat* x : xs) {
    for (const BigFloat* y : ys) {
      mpfr_div(t.get(), x->get(), y->get(), MPFR_RNDD);
      fix_lower(t, false);
      if (compare(t, lo) < 0) lo = t;
      mpfr_div(t.get(), x->get(), y->get(), MPFR_RNDU);
      fix_upper(t, false);
      if (compare(t, hi) > 0) hi = t;
    }
  }
  return Interval(std::move(lo), std::move(hi));
}

Interval abs(const Interval& a) {
  if (a.lo().sign() >= 0) return a;
  if (a.hi().sign() <= 0) return -a;
  BigFloat lo(a.precision()), hi(a.precision()), t(a.precision());
  mpfr_neg(t.get(), a.lo().get(), MPFR_RNDU);
  mpfr_max(hi.get(), t.get(), a.hi().get(), MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

Interval log(const Interval& a) {
  if (a.hi().sign() <= 0) {
    throw Error(ErrorKind::DomainError, "logarithm of a nonpositive value");
  }
  BigFloat lo(a.precision()), hi(a.precision());
  if (a.lo().sign() <= 0) mpfr_set_inf(lo.get(), -1);
  else mpfr_log(lo.get(), a.lo().get(), MPFR_RNDD);
  mpfr_log(hi.get(), a.hi().get(), MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

Interval exp(const Interval& a) {
  BigFloat lo(a.precision()), hi(a.precision());
  mpfr_exp(lo.get(), a.lo().get(), MPFR_RNDD);
  mpfr_exp(hi.get(), a.hi().get(), MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

Interval sqrt(const Interval& a) {
  if (a.hi().sign() < 0) {
    throw Error(ErrorKind::DomainError, "square root of a negative value");
  }
  BigFloat lo(a.precision()), hi(a.precision());
  if (a.lo().sign() > 0) mpfr_sqrt(lo.get(), a.lo().get(), MPFR_RNDD);
  mpfr_sqrt(hi.get(), a.hi().get(), MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

Interval min(const Interval& a, const Interval& b) {
  mpfr_prec_t p = join(a, b);
  BigFloat lo(p), hi(p);
  mpfr_min(lo.get(), a.lo().get(), b.lo().get(), MPFR_RNDD);
  mpfr_min(hi.get(), a.hi().get(), b.hi().get(), MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

Interval max(const Interval& a, const Interval& b) {
  mpfr_prec_t p = join(a, b);
  BigFloat lo(p), hi(p);
  mpfr_max(lo.get(), a.lo().get(), b.lo().get(), MPFR_RNDD);
  mpfr_max(hi.get(), a.hi().get(), b.hi().get(), MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

Interval hull(const Interval& a, const Interval& b) {
  mpfr_prec_t p = join(a, b);
  BigFloat lo(p), hi(p);
  mpfr_min(lo.get(), a.lo().get(), b.lo().get(), MPFR_RNDD);
  mpfr_max(hi.get(), a.hi().get(), b.hi().get(), MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

bool contains_integer(const Interval& a) {
  BigFloat c(a.precision() + 2), f(a.precision() + 2);
  mpfr_ceil(c.get(), a.lo().get());
  mpfr_floor(f.get(), a.hi().get());
  return compare(c, f) <= 0;
}

bool contains_half_integer(const Interval& a) {
  mpfr_prec_t p = a.precision() + 4;
  BigFloat lo2(p), hi2(p), c(p), f(p);
  mpfr_mul_2ui(lo2.get(), a.lo().get(), 1, MPFR_RNDN);
  mpfr_mul_2ui(hi2.get(), a.hi().get(), 1, MPFR_RNDN);
  mpfr_ceil(c.get(), lo2.get());
  mpfr_floor(f.get(), hi2.get());
  int cmp = compare(c, f);
  if (cmp > 0) return false;
  if (cmp < 0) return true;
  // Single integer candidate; is it odd?
  BigFloat h(p);
  mpfr_div_2ui(h.get(), c.get(), 1, MPFR_RNDN);
  return mpfr_integer_p(h.get()) == 0;
}

Interval dist_to_integer(const Interval& a) {
  mpfr_prec_t p = a.precision();
  BigFloat half(p);
  mpfr_set_d(half.get(), 0.5, MPFR_RNDN);
  if (!a.is_bounded()) return Interval(BigFloat(p), half);
  BigFloat w = a.width();
  if (mpfr_cmp_ui(w.get(), 1) >= 0) return Interval(BigFloat(p), half);

  bool has_int = contains_integer(a);
  bool has_half = contains_half_integer(a);
  BigFloat lo(p), hi(p);
  if (!has_int) {
    BigFloat dl = endpoint_dist(a.lo(), MPFR_RNDD);
    BigFloat dh = endpoint_dist(a.hi(), MPFR_RNDD);
    mpfr_min(lo.get(), dl.get(), dh.get(), MPFR_RNDD);
  }
  if (has_half) {
    hi = half;
  } else {
    BigFloat dl = endpoint_dist(a.lo(), MPFR_RNDU);
    BigFloat dh = endpoint_dist(a.hi(), MPFR_RNDU);
    mpfr_max(hi.get(), dl.get(), dh.get(), MPFR_RNDU);
  }
  return Interval(std::move(lo), std::move(hi));
}

Interval with_precision(const Interval& a, mpfr_prec_t prec) {
  BigFloat lo(prec), hi(prec);
  mpfr_set(lo.get(), a.lo().get(), MPFR_RNDD);
  mpfr_set(hi.get(), a.hi().get(), MPFR_RNDU);
  return Interval(std::move(lo), std::move(hi));
}

}  // namespace siegel
