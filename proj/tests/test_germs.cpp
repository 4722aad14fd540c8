#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "siegel/brjuno.hpp"
#include "siegel/germs.hpp"
#include "siegel/series_io.hpp"
#include "support.hpp"

using namespace siegel;
using testing_support::error_kind;

namespace {

using LD = long double;
using CL = std::complex<LD>;
using SL = Series<LD>;

const LD kTwoPi = 6.283185307179586476925286766559005768L;

SurdNumber s(std::uint64_t n) { return SurdNumber::sqrt_of(n); }
SurdNumber k(long v) { return SurdNumber(v); }
RealScalar ex(const SurdNumber& x) { return RealScalar::exact(x); }

RotationVector vec(std::vector<SurdNumber> xs) {
  std::vector<RealScalar> r;
  for (auto& x : xs) r.push_back(RealScalar::exact(std::move(x)));
  return RotationVector(std::move(r));
}

CL lambda_of(const RealScalar& alpha) {
  const LD a = alpha.enclosure().mid().to_long_double();
  return std::polar(LD(1), kTwoPi * a);
}

// z + z^2 + ... as given; c_0 = 0.
SL poly(std::vector<CL> from_one) {
  std::vector<CL> c{CL{}};
  c.insert(c.end(), from_one.begin(), from_one.end());
  return SL(std::move(c));
}

LD max_diff(const SL& a, const SL& b, int order) {
  LD m = 0;
  for (int n = 0; n <= order; ++n) m = std::max(m, std::abs(a.coeff(n) - b.coeff(n)));
  return m;
}

// lambda z + z^2, zero-padded through `order`.
PowerSeriesGerm<LD> quadratic(const RealScalar& alpha, int order) {
  std::vector<CL> a(static_cast<std::size_t>(order) - 1);
  a[0] = 1;
  return PowerSeriesGerm<LD>::make(alpha, a);
}

SL h0_tenth(int order) {
  SL h = SL::identity(order);
  h[2] = CL(0.1L, 0);
  return h;
}

const SurdNumber kTen[] = {
    s(2) - k(1), s(3) - k(1), SurdNumber::quadratic(-1, 1, 5, 2), s(5) - k(2), s(7) - k(2),
    s(11) - k(3), s(13) - k(3), SurdNumber::quadratic(1, 1, 3, 5), SurdNumber::quadratic(-2, 3, 2, 7),
    SurdNumber::quadratic(9, -2, 10, 11)};

}  // namespace

TEST(Compose, Examples) {
  SL f = poly({1, 1});
  SL ff = compose(f, f, 4);
  const CL want[] = {0, 1, 2, 2, 1};
  for (int n = 0; n <= 4; ++n) EXPECT_EQ(ff[n], want[n]) << n;
  EXPECT_EQ(max_diff(compose(f, SL::identity(8), 8), f.truncated(8), 8), 0);
  const CL la = lambda_of(ex(s(2) - k(1))), lb = lambda_of(ex(s(3) - k(1)));
  SL rr = compose(SL::rotation(la, 10), SL::rotation(lb, 10), 10);
  EXPECT_LT(std::abs(rr[1] - la * lb), 1e-18L);
  for (int n = 2; n <= 10; ++n) EXPECT_EQ(rr[n], CL{});
  EXPECT_EQ(error_kind([&] { compose(f, SL(std::vector<CL>{1, 1}), 3); }), ErrorKind::InvalidInput);
}

// Small integer coefficients keep every product exact in floating point.
TEST(Compose, AssociativeOnIntegerTriples) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> dist(-3, 3);
  for (int t = 0; t < 50; ++t) {
    auto random_series = [&] {
      std::vector<CL> c{CL{}};
      for (int n = 1; n <= 6; ++n) c.emplace_back(dist(rng), dist(rng));
      return SL(std::move(c));
    };
    SL f = random_series(), g = random_series(), h = random_series();
    SL left = compose(compose(f, g, 6), h, 6);
    SL right = compose(f, compose(g, h, 6), 6);
    for (int n = 0; n <= 6; ++n) EXPECT_EQ(left[n], right[n]) << "trial " << t << " n " << n;
  }
}

TEST(Invert, Catalan) {
  const int m = 12;
  SL g = series_invert(poly({1, 1}), m);
  auto want = oracle::inverse_of_z_plus_z2(m);
  for (int n = 1; n <= m; ++n) EXPECT_EQ(g[n].real(), want[n]) << n;
  EXPECT_EQ(g[5], CL(14, 0));
  EXPECT_EQ(max_diff(series_invert(SL::identity(9), 9), SL::identity(9), 9), 0);
}

TEST(Invert, RoundTrip) {
  const CL la = lambda_of(ex(s(2) - k(1)));
  SL f = poly({la, CL(0.3L, -0.2L), CL(0, 0.5L), CL(-0.1L, 0)});
  SL g = series_invert(f, 20);
  EXPECT_LT(max_diff(compose(f, g, 20), SL::identity(20), 20), 1e-12L);
  EXPECT_LT(max_diff(compose(g, f, 20), SL::identity(20), 20), 1e-12L);
  EXPECT_EQ(error_kind([] { series_invert(poly({0, 1}), 4); }), ErrorKind::DegenerateLinearTerm);
  EXPECT_EQ(error_kind([] { series_invert(SL(std::vector<CL>{1, 1, 1}), 4); }), ErrorKind::InvalidInput);
}

TEST(Commutator, Examples) {
  const CL la = lambda_of(ex(s(2) - k(1))), mu = lambda_of(ex(s(3) - k(1)));
  SL f = poly({la, 1}), g = poly({mu, 1});
  EXPECT_EQ(commutator_residual(f, f, 8), 0);
  EXPECT_EQ(commutator_residual(SL::rotation(la, 8), SL::rotation(mu, 8), 8), 0);
  SL fg = compose(f, g, 2), gf = compose(g, f, 2);
  const CL expect = (la + mu * mu) - (mu + la * la);
  EXPECT_LT(std::abs((fg[2] - gf[2]) - expect), 1e-18L);
  EXPECT_GT(std::abs(expect), 0.1L);
}

TEST(SmallDivisors, MatchLambdaPowers) {
  const RealScalar alpha = ex(s(2) - k(1));
  auto d = small_divisors<LD>(alpha, 30);
  const CL la = rotation_multiplier<LD>(alpha);
  EXPECT_LT(std::abs(la - lambda_of(alpha)), 1e-18L);
  EXPECT_EQ(d[1], CL{});
  CL p = 1;
  for (int n = 0; n <= 30; ++n) {
    EXPECT_LT(std::abs(d[n] - (p - la)), 1e-16L) << n;
    p *= la;
  }
}

TEST(Linearize, RotationIsIdentity) {
  const RealScalar alpha = ex(s(2) - k(1));
  auto f = PowerSeriesGerm<LD>::make(alpha, std::vector<CL>(31));
  auto r = linearize(f, 32);
  EXPECT_EQ(max_diff(r.h, SL::identity(32), 32), 0);
  EXPECT_EQ(r.residual, 0);
  EXPECT_TRUE(std::isinf(r.radius_estimate));
  EXPECT_TRUE(r.within_tol);
  auto report = radius_estimate_vs_bound(r, RealScalar::integer(1), ConstantsConfig::defaults());
  EXPECT_TRUE(std::isinf(report.ratio));
  EXPECT_TRUE(std::isinf(report.r_est));
}

TEST(Linearize, QuadraticSecondCoefficient) {
  for (const auto& a : kTen) {
    const RealScalar alpha = ex(a);
    auto r = linearize(quadratic(alpha, 16), 16);
    const CL la = lambda_of(alpha);
    const CL want = CL(1) / (la * la - la);
    EXPECT_LT(std::abs(r.h[2] - want), 1e-12L);
    EXPECT_LT(r.residual, 1e-12L);
    EXPECT_TRUE(r.within_tol);
  }
}

TEST(Linearize, RecoversSynthesizedConjugacy) {
  const int m = 64;
  auto family = synth_commuting_family(h0_tenth(m), vec({s(2) - k(1)}), m);
  auto r = linearize(family[0], m);
  EXPECT_LT(max_diff(r.h, h0_tenth(m), m), 1e-8L);
  EXPECT_TRUE(r.within_tol);
  EXPECT_GT(r.min_divisor, 0);
}

TEST(Linearize, RationalRotationUnderflows) {
  auto f = quadratic(RealScalar::rational(mpq_class(1, 3)), 8);
  EXPECT_EQ(error_kind([&] { linearize(f, 8); }), ErrorKind::SmallDivisorUnderflow);
}

TEST(Synth, Examples) {
  const RotationVector alphas = vec({s(2) - k(1), s(3) - k(1)});
  auto rotations = synth_commuting_family(SL::identity(16), alphas, 16);
  ASSERT_EQ(rotations.size(), 2u);
  for (const auto& g : rotations) {
    for (int n = 2; n <= 16; ++n) EXPECT_LT(std::abs(g.series[n]), 1e-18L);
  }
  auto fam = synth_commuting_family(h0_tenth(32), alphas, 32);
  const CL l1 = lambda_of(alphas[0]);
  EXPECT_LT(std::abs(fam[0].series[2] - CL(0.1L) * (l1 * l1 - l1)), 1e-15L);
  EXPECT_LE(commutator_residual(fam[0].series, fam[1].series, 32), 1e-12L);
  SL bad = SL::identity(8);
  bad[1] = 2;
  EXPECT_EQ(error_kind([&] { synth_commuting_family(bad, alphas, 8); }), ErrorKind::InvalidInput);
}

TEST(Simultaneous, Cases) {
  const RotationVector alphas = vec({s(2) - k(1), s(3) - k(1)});
  auto rot = simultaneous_check(synth_commuting_family(SL::identity(24), alphas, 24), 24);
  EXPECT_TRUE(rot.linearizable);
  EXPECT_LT(max_diff(rot.base.h, SL::identity(24), 24), 1e-18L);

  const int m = 64;
  auto fam = synth_commuting_family(h0_tenth(m), alphas, m);
  auto ok = simultaneous_check(fam, m);
  EXPECT_TRUE(ok.linearizable);
  EXPECT_LT(max_diff(ok.base.h, h0_tenth(m), m), 1e-8L);
  ASSERT_EQ(ok.residuals.size(), 2u);
  for (LD r : ok.residuals) EXPECT_LT(r, 1e-9L);

  auto broken = fam;
  broken[1].series[2] += CL(1e-3L, 0);
  EXPECT_EQ(error_kind([&] { simultaneous_check(broken, m); }), ErrorKind::CommutationViolated);
}

TEST(RadiusSurrogate, KnownSeries) {
  SL geo = SL::identity(40), ones = SL::identity(40);
  for (int n = 2; n <= 40; ++n) {
    geo[n] = std::pow(CL(0.5L, 0), LD(n - 1));
    ones[n] = 1;
  }
  EXPECT_NEAR(static_cast<double>(radius_surrogate(geo)), 2.0, 1e-15);
  EXPECT_NEAR(static_cast<double>(radius_surrogate(ones)), 1.0, 1e-15);
  EXPECT_TRUE(std::isinf(radius_surrogate(SL::identity(40))));
  // A wider window reaches the h_2 term of h0.
  EXPECT_NEAR(static_cast<double>(radius_surrogate(h0_tenth(10), {0.01})), 10.0, 1e-12);
}

// alpha = [0; 1, 10^6, 10^6, ...] has much smaller divisors than the golden mean.
TEST(RadiusSurrogate, GoldenBeatsLargePartialQuotient) {
  const SurdNumber x = s(250000000001) - k(500000);  // [0; 10^6, 10^6, ...]
  const RealScalar liouvillish = ex((k(1) + x).inverse());
  const RealScalar golden = ex(SurdNumber::quadratic(-1, 1, 5, 2));
  for (int m : {32, 64}) {
    auto rg = linearize(quadratic(golden, m), m);
    auto rl = linearize(quadratic(liouvillish, m), m);
    EXPECT_GT(rg.radius_estimate, rl.radius_estimate) << "M = " << m;
  }
}

TEST(RadiusReport, GoldenFamily) {
  const RealScalar golden = ex(SurdNumber::quadratic(-1, 1, 5, 2));
  const int m = 64;
  auto fam = synth_commuting_family(h0_tenth(m), RotationVector({golden}), m);
  auto r = linearize(fam[0], m);
  RealScalar b = brjuno_partial(RotationVector({golden}), Word(60, 1), BrjunoVariant::B).value;
  auto report = radius_estimate_vs_bound(r, b, ConstantsConfig::defaults());
  EXPECT_NEAR(report.b_value.to_double(), 1.4436354751788103, 1e-9);
  EXPECT_NEAR(report.r_bound.to_double(), 1.149941607971945e-4, 1e-12);
  EXPECT_NEAR(report.ratio, report.r_est / report.r_bound.to_double(), 1e-9 * report.ratio);
  EXPECT_GT(report.r_est, 0);
}

TEST(Germ, Validation) {
  const RealScalar alpha = ex(s(2) - k(1));
  SL bad = SL::identity(4);
  bad[0] = 1;
  EXPECT_EQ(error_kind([&] { PowerSeriesGerm<LD>::from_series(alpha, bad); }), ErrorKind::InvalidInput);
  SL nan = SL::identity(4);
  nan[3] = CL(NAN, 0);
  EXPECT_EQ(error_kind([&] { PowerSeriesGerm<LD>::from_series(alpha, nan); }), ErrorKind::InvalidInput);
  auto g = PowerSeriesGerm<LD>::make(alpha, {CL(1, 0), CL(2, 0)});
  EXPECT_EQ(g.order(), 3);
  EXPECT_LT(std::abs(std::abs(g.lambda()) - 1), 1e-18L);
}

TEST(SeriesJson, RoundTrip) {
  SL h = h0_tenth(6);
  h[4] = CL(-0.25L, 1.5L);
  auto j = series_to_json(h);
  EXPECT_EQ(j["M"], 6);
  SL back = series_from_json<LD>(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(back.order(), 6);
  EXPECT_LT(max_diff(back, h, 6), 1e-16L);  // JSON numbers are doubles
  SL bare = series_from_json<LD>(nlohmann::json::parse("[[0.5, 0], [0, 1]]"), CL(1, 0));
  EXPECT_EQ(bare.order(), 3);
  EXPECT_EQ(bare[1], CL(1, 0));
  EXPECT_EQ(bare[2], CL(0.5L, 0));
  EXPECT_EQ(bare[3], CL(0, 1));
}

TEST(Series, DoubleInstantiation) {
  const RealScalar alpha = ex(s(2) - k(1));
  std::vector<std::complex<double>> a(11);
  a[0] = 1;
  auto f = PowerSeriesGerm<double>::make(alpha, a);
  auto r = linearize(f, 12);
  EXPECT_TRUE(r.within_tol) << r.residual;
  const std::complex<double> la = rotation_multiplier<double>(alpha);
  EXPECT_LT(std::abs(r.h[2] - 1.0 / (la * la - la)), 1e-12);
}
