#pragma once

// Truncated power series for germs fixing 0, and the linearization
// f(h(z)) = h(lambda z) solved order by order.
//
// Coefficients are complex floating point (double or long double); accuracy
// is checked afterwards by substitution residuals, not by enclosures.

#include <complex>
#include <limits>
#include <vector>

#include "siegel/constants.hpp"
#include "siegel/gauss.hpp"
#include "siegel/real.hpp"

namespace siegel {

inline constexpr int kDefaultSeriesOrder = 64;
inline constexpr int kMaxSeriesOrder = 1024;

template <class T>
class Series {
 public:
  using Complex = std::complex<T>;

  // c_0 .. c_M, all zero.
  explicit Series(int order = 1);
  Series(std::vector<Complex> coeffs);

  static Series identity(int order);
  static Series rotation(Complex lambda, int order);

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const Complex& operator[](int n) const { return c_[static_cast<std::size_t>(n)]; }
  Complex& operator[](int n) { return c_[static_cast<std::size_t>(n)]; }
  // Zero above the truncation order.
  Complex coeff(int n) const { return n <= order() ? c_[static_cast<std::size_t>(n)] : Complex{}; }
  const std::vector<Complex>& coeffs() const { return c_; }

  Series truncated(int order) const;

 private:
  std::vector<Complex> c_;
};

// Product truncated at `order`.
template <class T>
Series<T> multiply(const Series<T>& a, const Series<T>& b, int order);

// f(g(z)) through order M; needs g(0) = 0.
template <class T>
Series<T> compose(const Series<T>& f, const Series<T>& g, int order);

// g with f(g(z)) = z through order M; needs f(0) = 0, f'(0) != 0.
template <class T>
Series<T> series_invert(const Series<T>& f, int order);

// max_{2 <= n <= M} |[z^n] (f o g - g o f)|
template <class T>
T commutator_residual(const Series<T>& f, const Series<T>& g, int order);

// e^{2 pi i alpha}, evaluated with MPFR at twice the digits of T.
template <class T>
std::complex<T> rotation_multiplier(const RealScalar& alpha);

// lambda^n - lambda for n = 0 .. order, same evaluation.
template <class T>
std::vector<std::complex<T>> small_divisors(const RealScalar& alpha, int order);

template <class T>
struct PowerSeriesGerm {
  RealScalar alpha;
  Series<T> series;  // series[1] = lambda

  // a = (a_2, ..., a_M)
  static PowerSeriesGerm make(const RealScalar& alpha, const std::vector<std::complex<T>>& a);
  static PowerSeriesGerm from_series(const RealScalar& alpha, Series<T> series);
  int order() const { return series.order(); }
  std::complex<T> lambda() const { return series[1]; }
};

struct WindowOptions {
  // Root test over n in [ceil(lo_fraction * M), M].
  double lo_fraction = 0.5;
};

template <class T>
struct LinearizeOptions {
  T tol = T(1e-9);
  // |lambda^n - lambda| below this is treated as resonance at working precision.
  T divisor_floor = 64 * std::numeric_limits<T>::epsilon();
  WindowOptions window;
};

template <class T>
struct LinearizationResult {
  Series<T> h;  // h[1] = 1
  T min_divisor = std::numeric_limits<T>::infinity();
  int min_divisor_order = 0;
  // 1 / max_n |h_n|^{1/(n-1)} over the window; infinity if h is linear there.
  T radius_estimate = std::numeric_limits<T>::infinity();
  T residual = 0;  // max_n |[z^n] (f o h - h o R)|
  bool within_tol = false;
};

template <class T>
LinearizationResult<T> linearize(const PowerSeriesGerm<T>& f, int order,
                                 const LinearizeOptions<T>& options = {});

// 1 / max_{n in window} |h_n|^{1/(n-1)}
template <class T>
T radius_surrogate(const Series<T>& h, const WindowOptions& window = {});

// f_k = h0 o R_{alpha_k} o h0^{-1}
template <class T>
std::vector<PowerSeriesGerm<T>> synth_commuting_family(const Series<T>& h0,
                                                       const RotationVector& alphas, int order);

template <class T>
struct SimultaneousResult {
  bool linearizable = false;
  LinearizationResult<T> base;        // linearization of germs[0]
  std::vector<T> residuals;           // max_n |[z^n] (h^{-1} o f_k o h - R_k)|
  std::vector<std::vector<T>> commutators;  // pairwise residuals, upper triangle
};

template <class T>
SimultaneousResult<T> simultaneous_check(const std::vector<PowerSeriesGerm<T>>& germs, int order,
                                         const LinearizeOptions<T>& options = {});

struct RadiusReport {
  double r_est = 0;  // may be infinity
  RealScalar b_value;
  RealScalar r_bound;
  double ratio = 0;  // r_est / r_bound, infinity with r_est
};

template <class T>
RadiusReport radius_estimate_vs_bound(const LinearizationResult<T>& result,
                                      const RealScalar& b_value, const ConstantsConfig& consts,
                                      const PrecisionPolicy& policy = {});

}  // namespace siegel
