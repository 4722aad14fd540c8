#include "siegel/germs.hpp"

#include <algorithm>
#include <cmath>

#include "siegel/brjuno.hpp"
#include "siegel/errors.hpp"

namespace siegel {

namespace {

void check_order(int order) {
  if (order < 1 || order > kMaxSeriesOrder) {
    throw Error(ErrorKind::InvalidInput,
                "truncation order must be in 1.." + std::to_string(kMaxSeriesOrder));
  }
}

template <class T>
T from_mpfr(const BigFloat& x) {
  if constexpr (std::is_same_v<T, long double>) return x.to_long_double();
  else return static_cast<T>(x.to_double());
}

template <class T>
mpfr_prec_t multiplier_bits() {
  return 2 * std::numeric_limits<T>::digits + 16;
}

// cos and sin of 2 pi n alpha at `prec` bits.
template <class T>
std::complex<T> unit_power(const BigFloat& two_pi_alpha, long n, mpfr_prec_t prec) {
  BigFloat angle(prec), c(prec), s(prec);
  mpfr_mul_si(angle.get(), two_pi_alpha.get(), n, MPFR_RNDN);
  mpfr_sin_cos(s.get(), c.get(), angle.get(), MPFR_RNDN);
  return {from_mpfr<T>(c), from_mpfr<T>(s)};
}

template <class T>
BigFloat two_pi_times(const RealScalar& alpha, mpfr_prec_t prec) {
  BigFloat a = alpha.at_precision(static_cast<int>(prec)).enclosure().mid();
  BigFloat r(prec);
  mpfr_const_pi(r.get(), MPFR_RNDN);
  mpfr_mul_2ui(r.get(), r.get(), 1, MPFR_RNDN);
  mpfr_mul(r.get(), r.get(), a.get(), MPFR_RNDN);
  return r;
}

}  // namespace

template <class T>
Series<T>::Series(int order) : c_(static_cast<std::size_t>(std::max(order, 0)) + 1) {}

template <class T>
Series<T>::Series(std::vector<Complex> coeffs) : c_(std::move(coeffs)) {
  if (c_.empty()) c_.resize(1);
}

template <class T>
Series<T> Series<T>::identity(int order) {
  Series s(order);
  if (order >= 1) s[1] = 1;
  return s;
}

template <class T>
Series<T> Series<T>::rotation(Complex lambda, int order) {
  Series s(order);
  if (order >= 1) s[1] = lambda;
  return s;
}

template <class T>
Series<T> Series<T>::truncated(int order) const {
  Series s(order);
  for (int n = 0; n <= std::min(order, this->order()); ++n) s[n] = c_[static_cast<std::size_t>(n)];
  return s;
}

template <class T>
Series<T> multiply(const Series<T>& a, const Series<T>& b, int order) {
  Series<T> r(order);
  const int na = std::min(a.order(), order);
  for (int i = 0; i <= na; ++i) {
    if (a[i] == std::complex<T>{}) continue;
    const int nb = std::min(b.order(), order - i);
    for (int j = 0; j <= nb; ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

template <class T>
Series<T> compose(const Series<T>& f, const Series<T>& g, int order) {
  check_order(order);
  if (g[0] != std::complex<T>{}) {
    throw Error(ErrorKind::InvalidInput, "inner series of a composition must vanish at 0");
  }
  const int top = std::min(f.order(), order);
  Series<T> r(order);
  r[0] = f[top];
  for (int k = top - 1; k >= 0; --k) {
    r = multiply(r, g, order);
    r[0] += f[k];
  }
  return r;
}

template <class T>
Series<T> series_invert(const Series<T>& f, int order) {
  check_order(order);
  if (f[0] != std::complex<T>{}) throw Error(ErrorKind::InvalidInput, "series must vanish at 0");
  if (f.order() < 1 || f[1] == std::complex<T>{}) {
    throw Error(ErrorKind::DegenerateLinearTerm, "linear coefficient is 0");
  }
  // Lagrange inversion: g_n = [z^{n-1}] phi^n / n with phi = z / f(z).
  const int m = order - 1;
  Series<T> u(m);
  for (int i = 0; i <= m; ++i) u[i] = f.coeff(i + 1);
  Series<T> phi(m);
  phi[0] = std::complex<T>(1) / u[0];
  for (int n = 1; n <= m; ++n) {
    std::complex<T> s{};
    for (int i = 1; i <= n; ++i) s += u[i] * phi[n - i];
    phi[n] = -s * phi[0];
  }
  Series<T> g(order);
  Series<T> power = phi;
  g[1] = phi[0];
  for (int n = 2; n <= order; ++n) {
    power = multiply(power, phi, m);
    g[n] = power[n - 1] / static_cast<T>(n);
  }
  return g;
}

template <class T>
T commutator_residual(const Series<T>& f, const Series<T>& g, int order) {
  Series<T> fg = compose(f, g, order);
  Series<T> gf = compose(g, f, order);
  T worst = 0;
  for (int n = 2; n <= order; ++n) worst = std::max(worst, std::abs(fg[n] - gf[n]));
  return worst;
}

template <class T>
std::complex<T> rotation_multiplier(const RealScalar& alpha) {
  const mpfr_prec_t prec = multiplier_bits<T>();
  return unit_power<T>(two_pi_times<T>(alpha, prec), 1, prec);
}

template <class T>
std::vector<std::complex<T>> small_divisors(const RealScalar& alpha, int order) {
  const mpfr_prec_t prec = multiplier_bits<T>();
  BigFloat theta = two_pi_times<T>(alpha, prec);
  BigFloat c1(prec), s1(prec);
  mpfr_sin_cos(s1.get(), c1.get(), theta.get(), MPFR_RNDN);
  std::vector<std::complex<T>> out(static_cast<std::size_t>(order) + 1);
  for (int n = 0; n <= order; ++n) {
    BigFloat angle(prec), c(prec), s(prec);
    mpfr_mul_si(angle.get(), theta.get(), n, MPFR_RNDN);
    mpfr_sin_cos(s.get(), c.get(), angle.get(), MPFR_RNDN);
    // Subtract before rounding to T: this is where cancellation happens.
    mpfr_sub(c.get(), c.get(), c1.get(), MPFR_RNDN);
    mpfr_sub(s.get(), s.get(), s1.get(), MPFR_RNDN);
    out[static_cast<std::size_t>(n)] = {from_mpfr<T>(c), from_mpfr<T>(s)};
  }
  return out;
}

template <class T>
PowerSeriesGerm<T> PowerSeriesGerm<T>::make(const RealScalar& alpha,
                                            const std::vector<std::complex<T>>& a) {
  if (a.empty()) throw Error(ErrorKind::InvalidInput, "germ needs truncation order >= 2");
  Series<T> s(static_cast<int>(a.size()) + 1);
  s[1] = rotation_multiplier<T>(alpha);
  for (std::size_t i = 0; i < a.size(); ++i) s[static_cast<int>(i) + 2] = a[i];
  return {alpha, std::move(s)};
}

template <class T>
PowerSeriesGerm<T> PowerSeriesGerm<T>::from_series(const RealScalar& alpha, Series<T> series) {
  if (series.order() < 2) throw Error(ErrorKind::InvalidInput, "germ needs truncation order >= 2");
  if (series[0] != std::complex<T>{}) throw Error(ErrorKind::InvalidInput, "germ must fix 0");
  for (const auto& c : series.coeffs()) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw Error(ErrorKind::InvalidInput, "germ coefficients must be finite");
    }
  }
  const std::complex<T> lambda = rotation_multiplier<T>(alpha);
  if (series[1] != std::complex<T>{} &&
      std::abs(series[1] - lambda) > std::sqrt(std::numeric_limits<T>::epsilon())) {
    throw Error(ErrorKind::InvalidInput, "linear coefficient does not match e^{2 pi i alpha}");
  }
  series[1] = lambda;
  return {alpha, std::move(series)};
}

template <class T>
T radius_surrogate(const Series<T>& h, const WindowOptions& window) {
  const int m = h.order();
  if (!(window.lo_fraction > 0 && window.lo_fraction <= 1)) {
    throw Error(ErrorKind::InvalidInput, "window fraction must be in (0, 1]");
  }
  const int lo = std::max(2, static_cast<int>(std::ceil(window.lo_fraction * m)));
  T root = 0;
  for (int n = lo; n <= m; ++n) {
    T mag = std::abs(h[n]);
    if (mag == 0) continue;
    root = std::max(root, std::exp(std::log(mag) / static_cast<T>(n - 1)));
  }
  return root == 0 ? std::numeric_limits<T>::infinity() : 1 / root;
}

template <class T>
LinearizationResult<T> linearize(const PowerSeriesGerm<T>& f, int order,
                                 const LinearizeOptions<T>& options) {
  if (order < 2 || order > kMaxSeriesOrder) {
    throw Error(ErrorKind::InvalidInput,
                "truncation order must be in 2.." + std::to_string(kMaxSeriesOrder));
  }
  if (f.order() < order) throw Error(ErrorKind::InvalidInput, "germ is truncated below the requested order");
  using C = std::complex<T>;
  const std::vector<C> d = small_divisors<T>(f.alpha, order);
  const C lambda = f.lambda();

  LinearizationResult<T> r;
  r.h = Series<T>::identity(order);
  Series<T>& h = r.h;
  // power[k][i] = [z^i] h^k, filled column by column.
  std::vector<std::vector<C>> power(static_cast<std::size_t>(order) + 1,
                                    std::vector<C>(static_cast<std::size_t>(order) + 1));
  power[1][1] = 1;
  for (int n = 2; n <= order; ++n) {
    C rhs{};
    for (int k = 2; k <= n; ++k) {
      C s{};
      for (int i = k - 1; i <= n - 1; ++i) s += power[k - 1][i] * h[n - i];
      power[k][n] = s;
      rhs += f.series[k] * s;
    }
    const T mag = std::abs(d[n]);
    if (mag < r.min_divisor) {
      r.min_divisor = mag;
      r.min_divisor_order = n;
    }
    if (mag < options.divisor_floor) {
      throw Error(ErrorKind::SmallDivisorUnderflow,
                  "|lambda^" + std::to_string(n) + " - lambda| is below the divisor floor");
    }
    h[n] = rhs / d[n];
    power[1][n] = h[n];
  }

  Series<T> fh = compose(f.series, h, order);
  for (int n = 1; n <= order; ++n) {
    C hr = h[n] * (d[n] + lambda);  // h_n lambda^n
    r.residual = std::max(r.residual, std::abs(fh[n] - hr));
  }
  r.within_tol = r.residual <= options.tol;
  r.radius_estimate = radius_surrogate(h, options.window);
  return r;
}

template <class T>
std::vector<PowerSeriesGerm<T>> synth_commuting_family(const Series<T>& h0,
                                                       const RotationVector& alphas, int order) {
  check_order(order);
  if (order < 2) throw Error(ErrorKind::InvalidInput, "truncation order must be >= 2");
  if (h0[0] != std::complex<T>{} || h0.order() < 1 ||
      std::abs(h0[1] - std::complex<T>(1)) > 8 * std::numeric_limits<T>::epsilon()) {
    throw Error(ErrorKind::InvalidInput, "generator must be z + O(z^2)");
  }
  Series<T> gen = h0.truncated(order);
  Series<T> inv = series_invert(gen, order);
  std::vector<PowerSeriesGerm<T>> out;
  for (const auto& alpha : alphas.values()) {
    const std::complex<T> lambda = rotation_multiplier<T>(alpha);
    Series<T> rotated = inv;
    for (int n = 0; n <= order; ++n) rotated[n] *= lambda;
    Series<T> f = compose(gen, rotated, order);
    f[1] = lambda;
    out.push_back({alpha, std::move(f)});
  }
  return out;
}

template <class T>
SimultaneousResult<T> simultaneous_check(const std::vector<PowerSeriesGerm<T>>& germs, int order,
                                         const LinearizeOptions<T>& options) {
  if (germs.empty()) throw Error(ErrorKind::InvalidInput, "no germs given");
  for (const auto& g : germs) {
    if (g.order() < order) throw Error(ErrorKind::InvalidInput, "germs must share the truncation order");
  }
  SimultaneousResult<T> r;
  r.commutators.resize(germs.size());
  for (std::size_t i = 0; i < germs.size(); ++i) {
    for (std::size_t j = i + 1; j < germs.size(); ++j) {
      T res = commutator_residual(germs[i].series, germs[j].series, order);
      r.commutators[i].push_back(res);
      if (!(res <= options.tol)) {
        throw Error(ErrorKind::CommutationViolated,
                    "germs " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                        " do not commute (residual " + std::to_string(static_cast<double>(res)) +
                        ")");
      }
    }
  }
  r.base = linearize(germs[0], order, options);
  Series<T> hinv = series_invert(r.base.h, order);
  r.linearizable = true;
  for (const auto& g : germs) {
    Series<T> conj = compose(hinv, compose(g.series, r.base.h, order), order);
    T res = std::abs(conj[1] - g.lambda());
    for (int n = 2; n <= order; ++n) res = std::max(res, std::abs(conj[n]));
    r.residuals.push_back(res);
    r.linearizable = r.linearizable && res <= options.tol;
  }
  return r;
}

template <class T>
RadiusReport radius_estimate_vs_bound(const LinearizationResult<T>& result,
                                      const RealScalar& b_value, const ConstantsConfig& consts,
                                      const PrecisionPolicy& policy) {
  RadiusReport report;
  report.r_est = static_cast<double>(result.radius_estimate);
  report.b_value = b_value;
  report.r_bound = siegel_radius_bound(b_value, consts, policy);
  report.ratio = std::isinf(report.r_est) ? report.r_est : report.r_est / report.r_bound.to_double();
  return report;
}

#define SIEGEL_INSTANTIATE(T)                                                                  \
  template class Series<T>;                                                                    \
  template struct PowerSeriesGerm<T>;                                                          \
  template Series<T> multiply(const Series<T>&, const Series<T>&, int);                        \
  template Series<T> compose(const Series<T>&, const Series<T>&, int);                         \
  template Series<T> series_invert(const Series<T>&, int);                                     \
  template T commutator_residual(const Series<T>&, const Series<T>&, int);                     \
  template std::complex<T> rotation_multiplier<T>(const RealScalar&);                          \
  template std::vector<std::complex<T>> small_divisors<T>(const RealScalar&, int);             \
  template T radius_surrogate(const Series<T>&, const WindowOptions&);                         \
  template LinearizationResult<T> linearize(const PowerSeriesGerm<T>&, int,                    \
                                            const LinearizeOptions<T>&);                       \
  template std::vector<PowerSeriesGerm<T>> synth_commuting_family(const Series<T>&,            \
                                                                  const RotationVector&, int); \
  template SimultaneousResult<T> simultaneous_check(const std::vector<PowerSeriesGerm<T>>&,    \
                                                    int, const LinearizeOptions<T>&);          \
  template RadiusReport radius_estimate_vs_bound(const LinearizationResult<T>&,                \
                                                 const RealScalar&, const ConstantsConfig&,    \
                                                 const PrecisionPolicy&);

SIEGEL_INSTANTIATE(double)
SIEGEL_INSTANTIATE(long double)

#undef SIEGEL_INSTANTIATE

}  // namespace siegel
