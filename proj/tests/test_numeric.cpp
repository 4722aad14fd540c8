#include <gtest/gtest.h>

#include <random>

#include "siegel/constants.hpp"
#include "siegel/interval.hpp"
#include "siegel/parse.hpp"
#include "siegel/real.hpp"
#include "siegel/surd.hpp"
#include "support.hpp"

using namespace siegel;
using oracle::Quad;
using testing_support::contains;
using testing_support::error_kind;
using testing_support::to_q;

namespace {

RealScalar enclosure_only(const Interval& x) {
  return RealScalar::computed([x](mpfr_prec_t) { return x; }, 64);
}

}  // namespace

TEST(Refine, ExactRationalHasZeroWidth) {
  RealScalar half = refine(RealScalar::rational(mpq_class(1, 2)), 1e-30);
  EXPECT_EQ(to_q(half.lo()), mpq_class(1, 2));
  EXPECT_EQ(to_q(half.hi()), mpq_class(1, 2));
  EXPECT_EQ(half.width_double(), 0.0);
}

TEST(Refine, SqrtTwoAgainstIntegerSquareRoot) {
  RealScalar r = refine(RealScalar::exact(SurdNumber::sqrt_of(2)), 1e-30);
  EXPECT_LE(r.width_double(), 1e-30);
  // floor(sqrt(2) 10^40) by integer square root.
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, 40);
  mpz_class n = 2 * scale * scale, root;
  mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
  mpq_class below(root, scale), above(root + 1, scale);
  EXPECT_LE(to_q(r.lo()), above);
  EXPECT_GE(to_q(r.hi()), below);
  EXPECT_LE(to_q(r.lo()) * to_q(r.lo()), 2);
  EXPECT_GE(to_q(r.hi()) * to_q(r.hi()), 2);
}

TEST(Refine, Idempotent) {
  RealScalar x = log(RealScalar::exact(SurdNumber::sqrt_of(3)) + RealScalar::integer(2));
  RealScalar once = refine(x, 1e-40);
  RealScalar twice = refine(once, 1e-40);
  EXPECT_EQ(compare(once.lo(), twice.lo()), 0);
  EXPECT_EQ(compare(once.hi(), twice.hi()), 0);
  EXPECT_EQ(once.precision_bits(), twice.precision_bits());
}

TEST(Refine, ExhaustsBudget) {
  RealScalar fuzzy = enclosure_only(Interval::from_rational(mpq_class(1, 3), 64));
  EXPECT_EQ(error_kind([&] { refine(fuzzy, 1e-300); }), ErrorKind::PrecisionExhausted);
}

TEST(CertifiedSign, Examples) {
  Interval pos = hull(Interval::from_rational(mpq_class(1, 10), 64), Interval::from_rational(mpq_class(2, 10), 64));
  EXPECT_EQ(certified_sign(enclosure_only(pos)), 1);
  RealScalar x = RealScalar::integer(2) * RealScalar::exact(SurdNumber::sqrt_of(2)) - RealScalar::integer(3);
  EXPECT_TRUE(x.is_exact());
  EXPECT_EQ(certified_sign(x), -1);
  EXPECT_EQ(certified_sign(RealScalar::integer(0)), 0);
}

TEST(CertifiedSign, StraddlingZeroIsUndecidable) {
  Interval around = hull(Interval::point_si(-1, 64), Interval::point_si(1, 64));
  EXPECT_EQ(error_kind([&] { certified_sign(enclosure_only(around)); }), ErrorKind::UndecidableAtPrecision);
}

TEST(CertifiedSign, StableUnderRefinement) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    Quad a = oracle::random_unit_surd(rng, 2), b = oracle::random_unit_surd(rng, 2);
    RealScalar x = log(testing_support::real(a)) - log(testing_support::real(b));
    if ((a - b).sign() == 0) continue;
    int s = certified_sign(x);
    EXPECT_EQ(s, (a - b).sign());
    EXPECT_EQ(certified_sign(x.at_precision(1024)), s);
  }
}

TEST(CertifiedRound, ExactHalfIsATie) {
  EXPECT_EQ(error_kind([] { certified_round(RealScalar::rational(mpq_class(5, 2))); }), ErrorKind::ExactTie);
  EXPECT_EQ(certified_round(RealScalar::rational(mpq_class(7, 3))), 2);
  EXPECT_EQ(certified_round(RealScalar::exact(SurdNumber::sqrt_of(7))), 3);
  EXPECT_EQ(certified_floor(RealScalar::rational(mpq_class(-1, 3))), -1);
}

// Random expression trees over Q(sqrt(d)): the exact tier, the lazy interval
// tier and raw 53-bit intervals must all contain the true value.
TEST(OutwardRounding, ThousandRandomSurdExpressions) {
  std::mt19937_64 rng(20241014);
  const long ds[] = {2, 3, 5, 7, 11};
  int checked = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const long d = ds[trial % 5];
    struct Node {
      Quad q;
      RealScalar exact;
      RealScalar lazy;
      Interval raw;
    };
    auto leaf = [&] {
      Quad q = oracle::random_unit_surd(rng, d);
      SurdNumber s = testing_support::to_surd(q);
      RealScalar lazy = RealScalar::computed([s](mpfr_prec_t p) { return s.enclose(p); }, 53);
      return Node{q, RealScalar::exact(s, 53), lazy, s.enclose(53)};
    };
    Node acc = leaf();
    const int ops = 1 + static_cast<int>(rng() % 6);
    for (int k = 0; k < ops; ++k) {
      Node rhs = leaf();
      switch (rng() % 5) {
        case 0: acc = {acc.q + rhs.q, acc.exact + rhs.exact, acc.lazy + rhs.lazy, acc.raw + rhs.raw}; break;
        case 1: acc = {acc.q - rhs.q, acc.exact - rhs.exact, acc.lazy - rhs.lazy, acc.raw - rhs.raw}; break;
        case 2: acc = {acc.q * rhs.q, acc.exact * rhs.exact, acc.lazy * rhs.lazy, acc.raw * rhs.raw}; break;
        case 3: acc = {acc.q / rhs.q, acc.exact / rhs.exact, acc.lazy / rhs.lazy, acc.raw / rhs.raw}; break;
        default: acc = {oracle::abs(-acc.q), abs(-acc.exact), abs(-acc.lazy), abs(-acc.raw)}; break;
      }
    }
    ASSERT_TRUE(acc.exact.is_exact());
    EXPECT_TRUE((*acc.exact.exact_value() - testing_support::to_surd(acc.q)).is_zero()) << "trial " << trial;
    EXPECT_TRUE(contains(acc.exact.enclosure(), acc.q)) << "trial " << trial;
    EXPECT_TRUE(contains(acc.lazy.enclosure(), acc.q)) << "trial " << trial;
    EXPECT_TRUE(contains(acc.lazy.at_precision(300).enclosure(), acc.q)) << "trial " << trial;
    EXPECT_TRUE(contains(acc.raw, acc.q)) << "trial " << trial;
    EXPECT_EQ(certified_sign(acc.exact), acc.q.sign());
    ++checked;
  }
  EXPECT_EQ(checked, 1000);
}

TEST(Transcendental, EnclosuresAreConsistent) {
  RealScalar x = RealScalar::exact(SurdNumber::sqrt_of(5));
  RealScalar back = exp(log(x));
  EXPECT_LE(compare(back.lo(), x.hi()), 0);
  EXPECT_GE(compare(back.hi(), x.lo()), 0);
  RealScalar p = pow(RealScalar::integer(3), RealScalar::integer(4));
  EXPECT_TRUE(p.is_exact());
  EXPECT_EQ(p.exact_value()->as_integer().value(), 81);
  EXPECT_EQ(error_kind([] { log(RealScalar::integer(-1)); }), ErrorKind::DomainError);
  EXPECT_EQ(error_kind([] { RealScalar::integer(1) / RealScalar::integer(0); }), ErrorKind::DomainError);
}

TEST(Surd, MultiRadicalInverseAndSign) {
  SurdNumber x = SurdNumber::sqrt_of(2) + SurdNumber::sqrt_of(3) + SurdNumber::sqrt_of(5);
  EXPECT_TRUE((x * x.inverse() - SurdNumber(1)).is_zero());
  // sqrt(2) + sqrt(3) = 3.146... < sqrt(10) = 3.162...
  EXPECT_EQ((SurdNumber::sqrt_of(2) + SurdNumber::sqrt_of(3) - SurdNumber::sqrt_of(10)).sign(), -1);
  EXPECT_TRUE((SurdNumber::sqrt_of(2) * SurdNumber::sqrt_of(3) - SurdNumber::sqrt_of(6)).is_zero());
  EXPECT_TRUE((SurdNumber::sqrt_of(72) - 6 * SurdNumber::sqrt_of(2)).is_zero());
  EXPECT_EQ(square_split(72), (std::pair<std::uint64_t, std::uint64_t>{6, 2}));
  EXPECT_FALSE(SurdNumber(mpq_class(5, 2)).nearest_integer().has_value());
  EXPECT_EQ(SurdNumber::sqrt_of(8).nearest_integer().value(), 3);
  EXPECT_EQ(SurdNumber::quadratic(1, 1, 5, 2).floor(), 1);
  EXPECT_EQ(error_kind([] { SurdNumber(0).inverse(); }), ErrorKind::DomainError);
}

TEST(Surd, AgreesWithQuadraticOracle) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    Quad a = oracle::random_unit_surd(rng, 13), b = oracle::random_unit_surd(rng, 13);
    SurdNumber sa = testing_support::to_surd(a), sb = testing_support::to_surd(b);
    EXPECT_TRUE((sa / sb - testing_support::to_surd(a / b)).is_zero());
    EXPECT_EQ((sa - sb).sign(), (a - b).sign());
    EXPECT_EQ(((sa.inverse()).nearest_integer()).value(), oracle::nearest(a.inverse()));
  }
}

TEST(Parse, Formats) {
  EXPECT_TRUE((parse_real("(0+1*sqrt(2))/1-1").value - (SurdNumber::sqrt_of(2) - SurdNumber(1))).is_zero());
  EXPECT_TRUE((parse_real("sqrt2m1").value - (SurdNumber::sqrt_of(2) - SurdNumber(1))).is_zero());
  EXPECT_TRUE((parse_real("golden").value - SurdNumber::quadratic(-1, 1, 5, 2)).is_zero());
  EXPECT_EQ(parse_real("0.1").value.as_rational().value(), mpq_class(1, 10));
  EXPECT_EQ(parse_real("-7/5").value.as_rational().value(), mpq_class(-7, 5));
  EXPECT_EQ(parse_real("1e-3").value.as_rational().value(), mpq_class(1, 1000));
  EXPECT_EQ(parse_real("pi").warnings.size(), 1u);
  EXPECT_EQ(parse_real_list("(1+sqrt(2))/3, 1/2").size(), 2u);
  EXPECT_EQ(parse_int_list("1,2,1"), (std::vector<int>{1, 2, 1}));
  EXPECT_EQ(error_kind([] { parse_real("sqrt(2"); }), ErrorKind::InvalidInput);
  EXPECT_EQ(error_kind([] { parse_real("1/0"); }), ErrorKind::InvalidInput);
  EXPECT_EQ(error_kind([] { parse_real("foo"); }), ErrorKind::InvalidInput);
}

TEST(Constants, DefaultsAndValidation) {
  ConstantsConfig c = ConstantsConfig::make(RealScalar::integer(1));
  EXPECT_EQ(c.c_prime.exact_value()->as_integer().value(), 8);
  EXPECT_EQ(c.c_radius.exact_value()->as_integer().value(), 1);
  EXPECT_EQ(error_kind([] { ConstantsConfig::make(RealScalar::integer(-1)); }), ErrorKind::InvalidInput);
  EXPECT_EQ(error_kind([] { ConstantsConfig::make(RealScalar::integer(0), std::nullopt, RealScalar::integer(0)); }),
            ErrorKind::InvalidInput);
}
