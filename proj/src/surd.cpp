#include "siegel/surd.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "siegel/errors.hpp"

namespace siegel {

std::pair<std::uint64_t, std::uint64_t> square_split(std::uint64_t n) {
  if (n == 0) return {0, 0};
  std::uint64_t square = 1;
  std::uint64_t core = 1;
  for (std::uint64_t p = 2; p <= n / p; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    for (int i = 0; i < e / 2; ++i) square *= p;
    if (e % 2 == 1) core *= p;
  }
  core *= n;
  return {square, core};
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p <= n / p; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

SurdNumber::SurdNumber(long v) {
  if (v != 0) terms_.emplace(1, mpq_class(v));
}

SurdNumber::SurdNumber(mpq_class q) {
  q.canonicalize();
  if (q != 0) terms_.emplace(1, std::move(q));
}

SurdNumber SurdNumber::sqrt_of(std::uint64_t n) {
  auto [square, core] = square_split(n);
  SurdNumber r;
  if (n != 0) r.add_term(core, mpq_class(mpz_class(static_cast<unsigned long>(square))));
  return r;
}

SurdNumber SurdNumber::quadratic(const mpz_class& p, const mpz_class& q, std::uint64_t d,
                                 const mpz_class& r) {
  if (r == 0) throw Error(ErrorKind::InvalidInput, "surd denominator is zero");
  SurdNumber x{mpq_class(p)};
  x += SurdNumber(mpq_class(q)) * sqrt_of(d);
  return x / SurdNumber(mpq_class(r));
}

bool SurdNumber::is_rational() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 1);
}

std::optional<mpq_class> SurdNumber::as_rational() const {
  if (terms_.empty()) return mpq_class(0);
  if (!is_rational()) return std::nullopt;
  return terms_.begin()->second;
}

std::optional<mpz_class> SurdNumber::as_integer() const {
  auto q = as_rational();
  if (!q || q->get_den() != 1) return std::nullopt;
  return q->get_num();
}

std::vector<SurdNumber::Radicand> SurdNumber::radicands() const {
  std::vector<Radicand> out;
  for (const auto& [m, c] : terms_) out.push_back(m);
  return out;
}

void SurdNumber::add_term(Radicand m, const mpq_class& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

SurdNumber SurdNumber::operator-() const {
  SurdNumber r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

SurdNumber& SurdNumber::operator+=(const SurdNumber& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

SurdNumber& SurdNumber::operator-=(const SurdNumber& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

SurdNumber& SurdNumber::operator*=(const SurdNumber& o) {
  SurdNumber r;
  for (const auto& [m1, c1] : terms_) {
    for (const auto& [m2, c2] : o.terms_) {
      // sqrt(m1) sqrt(m2) = g sqrt((m1/g)(m2/g)) with g = gcd(m1, m2)
      std::uint64_t g = std::gcd(m1, m2);
      unsigned __int128 m = static_cast<unsigned __int128>(m1 / g) * (m2 / g);
      if (m > std::numeric_limits<std::uint64_t>::max()) {
        throw Error(ErrorKind::DomainError, "radicand overflow in surd product");
      }
      mpq_class c = c1 * c2;
      c *= mpz_class(static_cast<unsigned long>(g));
      r.add_term(static_cast<std::uint64_t>(m), c);
    }
  }
  *this = std::move(r);
  return *this;
}

SurdNumber SurdNumber::inverse() const {
  if (is_zero()) throw Error(ErrorKind::DomainError, "inverse of exact zero");
  if (is_rational()) return SurdNumber(mpq_class(1) / terms_.begin()->second);
  // Eliminate the largest prime p under a radical: x = A + B sqrt(p), and
  // (A + B sqrt(p)) (A - B sqrt(p)) = A^2 - p B^2 is free of sqrt(p).
  std::uint64_t p = 1;
  for (const auto& [m, c] : terms_) {
    for (std::uint64_t f : prime_factors(m)) p = std::max(p, f);
  }
  SurdNumber a, b;
  for (const auto& [m, c] : terms_) {
    if (m % p == 0) b.add_term(m / p, c);
    else a.add_term(m, c);
  }
  SurdNumber conj = a - b * sqrt_of(p);
  SurdNumber norm = a * a - b * b * SurdNumber(static_cast<long>(p));
  return conj * norm.inverse();
}

SurdNumber& SurdNumber::operator/=(const SurdNumber& o) {
  *this *= o.inverse();
  return *this;
}

int SurdNumber::sign() const {
  if (terms_.empty()) return 0;
  if (is_rational()) return sgn(terms_.begin()->second);
  // Nonzero algebraic number: some finite precision separates it from 0.
  for (mpfr_prec_t prec = 64;; prec *= 2) {
    int s = enclose(prec).certain_sign();
    if (s == 1 || s == -1) return s;
    if (prec > (mpfr_prec_t{1} << 26)) {
      throw Error(ErrorKind::PrecisionExhausted, "surd sign did not resolve");
    }
  }
}

std::optional<mpz_class> SurdNumber::nearest_integer() const {
  if (is_rational()) {
    mpq_class q = as_rational().value();
    mpq_class twice = q * 2;
    if (twice.get_den() == 1 && mpz_odd_p(twice.get_num_mpz_t())) return std::nullopt;
    mpq_class shifted = q + mpq_class(1, 2);
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), shifted.get_num_mpz_t(), shifted.get_den_mpz_t());
    return f;
  }
  // An irrational value is never a half-integer, so refinement terminates.
  for (mpfr_prec_t prec = 64 + static_cast<mpfr_prec_t>(height_bits());; prec *= 2) {
    Interval enc = enclose(prec);
    if (enc.is_bounded() && !contains_half_integer(enc)) {
      BigFloat r(prec + 2);
      mpfr_round(r.get(), enc.lo().get());
      mpz_class z;
      mpfr_get_z(z.get_mpz_t(), r.get(), MPFR_RNDN);
      return z;
    }
    if (prec > (mpfr_prec_t{1} << 26)) {
      throw Error(ErrorKind::PrecisionExhausted, "surd rounding did not resolve");
    }
  }
}

mpz_class SurdNumber::floor() const {
  if (is_rational()) {
    mpq_class q = as_rational().value();
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return f;
  }
  for (mpfr_prec_t prec = 64 + static_cast<mpfr_prec_t>(height_bits());; prec *= 2) {
    Interval enc = enclose(prec);
    if (enc.is_bounded() && !contains_integer(enc)) {
      BigFloat f(prec + 2);
      mpfr_floor(f.get(), enc.lo().get());
      mpz_class z;
      mpfr_get_z(z.get_mpz_t(), f.get(), MPFR_RNDN);
      return z;
    }
    if (prec > (mpfr_prec_t{1} << 26)) {
      throw Error(ErrorKind::PrecisionExhausted, "surd floor did not resolve");
    }
  }
}

Interval SurdNumber::enclose(mpfr_prec_t prec) const {
  mpfr_prec_t work = prec + 16;
  Interval sum = Interval::point_si(0, work);
  for (const auto& [m, c] : terms_) {
    Interval coef = Interval::from_rational(c, work);
    if (m == 1) sum = sum + coef;
    else sum = sum + coef * Interval::sqrt_of(static_cast<unsigned long>(m), work);
  }
  return with_precision(sum, prec);
}

std::string SurdNumber::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << (sgn(c) < 0 ? " - " : " + ");
    else if (sgn(c) < 0) os << "-";
    first = false;
    os << mpq_class(::abs(c)).get_str();
    if (m != 1) os << "*sqrt(" << m << ")";
  }
  return os.str();
}

std::size_t SurdNumber::height_bits() const {
  std::size_t bits = 0;
  for (const auto& [m, c] : terms_) {
    bits = std::max({bits, mpz_sizeinbase(c.get_num_mpz_t(), 2),
                     mpz_sizeinbase(c.get_den_mpz_t(), 2)});
  }
  return bits;
}

}  // namespace siegel
