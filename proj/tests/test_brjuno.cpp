#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "siegel/brjuno.hpp"
#include "support.hpp"

using namespace siegel;
using testing_support::error_kind;

namespace {

const long double kPhi = (1 + std::sqrt(5.0L)) / 2;
const long double kPiL = 3.141592653589793238462643383279502884L;

RotationVector golden() { return RotationVector({RealScalar::exact(SurdNumber::quadratic(-1, 1, 5, 2))}); }

RotationVector pair(const SurdNumber& a, const SurdNumber& b) {
  return RotationVector({RealScalar::exact(a), RealScalar::exact(b)});
}

RotationVector sqrt_pair() {
  return pair(SurdNumber::sqrt_of(2) - SurdNumber(1), SurdNumber::sqrt_of(3) - SurdNumber(1));
}

// Every word of length `depth` by depth-first enumeration; the minimum is
// chosen by certified comparison.
struct Exhaustive {
  Word word;
  RealScalar value;
};

Exhaustive exhaustive_min(const RotationVector& alpha, int depth, BrjunoVariant variant) {
  std::optional<Exhaustive> best;
  Word prefix;
  std::function<void(const RotationVector&, const RealScalar&, const RealScalar&)> dfs =
      [&](const RotationVector& state, const RealScalar& product, const RealScalar& partial) {
        if (static_cast<int>(prefix.size()) == depth) {
          if (!best || certified_compare(partial, best->value) < 0) best = Exhaustive{prefix, partial};
          return;
        }
        for (int j = 1; j <= static_cast<int>(state.size()); ++j) {
          GaussStep st = gauss_step(state, j);
          const RealScalar& pivot = state.letter(j);
          prefix.push_back(j);
          dfs(st.image, product * pivot, partial + product * brjuno_summand(pivot, variant));
          prefix.pop_back();
        }
      };
  dfs(alpha, RealScalar::integer(1), RealScalar::integer(0));
  return *best;
}

SurdNumber random_unit(std::mt19937_64& rng, long d) {
  return testing_support::to_surd(oracle::random_unit_surd(rng, d));
}

}  // namespace

TEST(BrjunoPartial, GoldenSingleTerm) {
  BrjunoSum sum = brjuno_partial(golden(), {1}, BrjunoVariant::B);
  EXPECT_NEAR(sum.value.to_double(), static_cast<double>(std::log(kPhi)), 1e-15);
  BrjunoSum bp = brjuno_partial(golden(), {1}, BrjunoVariant::BPrime);
  EXPECT_NEAR(bp.value.to_double(), static_cast<double>(std::log(1 + std::log(kPhi))), 1e-15);
}

TEST(BrjunoPartial, GoldenClosedForm) {
  BrjunoSum sum = brjuno_partial(golden(), Word(60, 1), BrjunoVariant::B);
  EXPECT_NEAR(sum.value.to_double(), static_cast<double>(3 * std::log(kPhi)), 1e-9);
  EXPECT_EQ(sum.terms.size(), 60u);
}

TEST(BrjunoPartial, EmptyWord) {
  BrjunoSum sum = brjuno_partial(golden(), {}, BrjunoVariant::B);
  EXPECT_TRUE(sum.terms.empty());
  EXPECT_EQ(certified_sign(sum.value), 0);
}

TEST(BrjunoPartial, TermInvariants) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 10; ++t) {
    RotationVector a = pair(random_unit(rng, 2), random_unit(rng, 7));
    Word w;
    for (int i = 0; i < 12; ++i) w.push_back(1 + static_cast<int>(rng() % 2));
    for (BrjunoVariant v : {BrjunoVariant::B, BrjunoVariant::BPrime}) {
      BrjunoSum sum;
      try {
        sum = brjuno_partial(a, w, v);
      } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ExactTie);
        continue;
      }
      auto orbit = gauss_orbit(a, w);
      RealScalar running = RealScalar::integer(0);
      for (std::size_t n = 0; n < sum.terms.size(); ++n) {
        const auto& term = sum.terms[n];
        EXPECT_EQ(certified_sign(term.value), 1);
        if (n == 0) {
          EXPECT_EQ(certified_compare(term.product, RealScalar::integer(1)), 0);
        } else {
          RealScalar pivot = (n == 1 ? a : orbit[n - 2].image).letter(w[n - 1]);
          EXPECT_EQ(certified_compare(term.product, sum.terms[n - 1].product * pivot), 0);
          // pi_n <= 2^{-(n-1)}
          mpz_class den = mpz_class(1) << static_cast<unsigned>(n - 1);
          EXPECT_LE(certified_compare(term.product, RealScalar::rational(mpq_class(1, den))), 0);
        }
        RealScalar next = running + term.value;
        EXPECT_GE(certified_compare(next, running), 0);
        running = next;
      }
    }
  }
}

TEST(BrjunoMinimize, SingleLetterIsPartialSum) {
  WordSearchResult r = brjuno_minimize(golden(), 12, BrjunoVariant::B);
  EXPECT_EQ(r.best_word, Word(12, 1));
  EXPECT_TRUE(r.proof);
  BrjunoSum direct = brjuno_partial(golden(), Word(12, 1), BrjunoVariant::B);
  EXPECT_EQ(compare(r.best_value.lo(), direct.value.lo()), 0);
}

TEST(BrjunoMinimize, MatchesExhaustiveDepth3) {
  RotationVector a = sqrt_pair();
  for (BrjunoVariant v : {BrjunoVariant::B, BrjunoVariant::BPrime}) {
    WordSearchResult r = brjuno_minimize(a, 3, v);
    Exhaustive e = exhaustive_min(a, 3, v);
    EXPECT_EQ(r.best_word, e.word);
    EXPECT_TRUE(r.proof);
    EXPECT_LE(compare(r.best_value.lo(), e.value.hi()), 0);
    EXPECT_GE(compare(r.best_value.hi(), e.value.lo()), 0);
  }
}

TEST(BrjunoMinimize, MatchesExhaustiveOnRandomPairs) {
  std::mt19937_64 rng(99);
  const long ds[][2] = {{2, 3}, {5, 7}, {2, 11}, {3, 13}, {6, 5}};
  for (int t = 0; t < 5; ++t) {
    RotationVector a = pair(random_unit(rng, ds[t][0]), random_unit(rng, ds[t][1]));
    for (int depth = 1; depth <= 5; ++depth) {
      for (BrjunoVariant v : {BrjunoVariant::B, BrjunoVariant::BPrime}) {
        WordSearchResult r = brjuno_minimize(a, depth, v);
        Exhaustive e = exhaustive_min(a, depth, v);
        EXPECT_EQ(r.best_word, e.word) << "pair " << t << " depth " << depth;
      }
    }
  }
}

TEST(BrjunoMinimize, MonotoneInDepth) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 5; ++t) {
    RotationVector a = pair(random_unit(rng, 2), random_unit(rng, 5));
    WordSearchResult d3 = brjuno_minimize(a, 3, BrjunoVariant::B);
    WordSearchResult d4 = brjuno_minimize(a, 4, BrjunoVariant::B);
    EXPECT_GE(certified_compare(d4.best_value, d3.best_value), 0);
  }
}

TEST(BrjunoMinimize, IndependentOfThreads) {
  RotationVector a = sqrt_pair();
  WordSearchResult one = brjuno_minimize(a, 8, BrjunoVariant::B, {1, {}});
  WordSearchResult many = brjuno_minimize(a, 8, BrjunoVariant::B, {8, {}});
  EXPECT_EQ(one.best_word, many.best_word);
  EXPECT_EQ(compare(one.best_value.lo(), many.best_value.lo()), 0);
  EXPECT_EQ(compare(one.best_value.hi(), many.best_value.hi()), 0);
}

TEST(BrjunoMinimize, ExcludesFailingWords) {
  // 3/8 -> 1/3 -> 0 along the letter 1.
  RotationVector a = pair(SurdNumber(mpq_class(3, 8)), SurdNumber::sqrt_of(2) - SurdNumber(1));
  WordSearchResult r = brjuno_minimize(a, 3, BrjunoVariant::B);
  EXPECT_FALSE(r.proof);
  ASSERT_FALSE(r.excluded.empty());
  bool found = false;
  for (const auto& ex : r.excluded) found = found || ex.prefix == Word{1, 1};
  EXPECT_TRUE(found);
  EXPECT_FALSE(r.best_word[0] == 1 && r.best_word[1] == 1);
  RotationVector lone({RealScalar::rational(mpq_class(3, 8))});
  EXPECT_EQ(error_kind([&] { brjuno_minimize(lone, 2, BrjunoVariant::B); }), ErrorKind::DomainError);
  EXPECT_EQ(error_kind([&] { brjuno_minimize(golden(), 0, BrjunoVariant::B); }), ErrorKind::InvalidInput);
}

TEST(HeightBound, GoldenLogRegime) {
  ConstantsConfig zero = ConstantsConfig::make(RealScalar::integer(0), RealScalar::integer(0));
  RealScalar y = height_bound(golden(), Word(60, 1), HeightRegime::Log, zero);
  const long double expect = 3 * std::log(kPhi) / (2 * kPiL);
  EXPECT_NEAR(y.to_double(), static_cast<double>(expect), 1e-9);
  // Sum of the products along the golden orbit is 1 + (phi-1)/(1 - (3-sqrt5)/2) = 2.
  ConstantsConfig c = ConstantsConfig::make(RealScalar::rational(mpq_class(1, 2)), RealScalar::integer(0));
  RealScalar y2 = height_bound(golden(), Word(60, 1), HeightRegime::Log, c);
  EXPECT_NEAR(y2.to_double(), static_cast<double>(expect + 1), 1e-9);
  RealScalar ll = height_bound(golden(), Word(60, 1), HeightRegime::LogLog, zero);
  EXPECT_GT(ll.to_double(), 0);
  EXPECT_LT(ll.to_double(), y.to_double());
}

TEST(HeightBound, EmptyWordIsCPrime) {
  ConstantsConfig c = ConstantsConfig::make(RealScalar::integer(0), RealScalar::rational(mpq_class(7, 3)));
  RealScalar y = height_bound(golden(), {}, HeightRegime::Log, c);
  ASSERT_TRUE(y.is_exact());
  EXPECT_EQ(y.exact_value()->as_rational().value(), mpq_class(7, 3));
}

TEST(RadiusBound, Examples) {
  ConstantsConfig c = ConstantsConfig::defaults();
  RealScalar one = siegel_radius_bound(RealScalar::integer(0), c);
  EXPECT_NEAR(one.to_double(), 1.0, 1e-30);
  RealScalar b = brjuno_partial(golden(), Word(60, 1), BrjunoVariant::B).value;
  RealScalar r = siegel_radius_bound(b, c);
  const long double expect = std::exp(-6 * kPiL * std::log(kPhi));
  EXPECT_NEAR(r.to_double() / static_cast<double>(expect), 1.0, 1e-8);
  RealScalar r2 = siegel_radius_bound(b + b, c);
  EXPECT_NEAR(r2.to_double() / (r.to_double() * r.to_double()), 1.0, 1e-12);
  EXPECT_EQ(error_kind([&] { siegel_radius_bound(RealScalar::integer(-1), c); }), ErrorKind::DomainError);
}
