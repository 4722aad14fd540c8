#include "siegel/dioph.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include "siegel/errors.hpp"

namespace siegel {

namespace {

// Runs body(chunk) for chunk in [0, chunks) on up to `threads` workers.
// Callers reduce per-chunk results in chunk order, so output does not depend
// on the thread count.
template <class Body>
void parallel_chunks(std::size_t chunks, unsigned threads, Body body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(chunks)));
  if (threads <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) body(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      try {
        for (std::size_t c; (c = next.fetch_add(1)) < chunks;) body(c);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

void require_positive(const RealScalar& x, const char* name, const PrecisionPolicy& policy) {
  if (certified_sign(x, policy) <= 0) {
    throw Error(ErrorKind::InvalidInput, std::string(name) + " must be positive");
  }
}

// q^tau as an interval; exact powers when tau is a small exact integer.
class PowerTable {
 public:
  PowerTable(const RealScalar& tau, mpfr_prec_t prec) : prec_(prec), tau_(tau.at_precision(static_cast<int>(prec)).enclosure()) {
    if (const SurdNumber* e = tau.exact_value()) {
      if (auto z = e->as_integer(); z && z->fits_slong_p() && *z >= 0 && *z <= 8) {
        int_tau_ = static_cast<int>(z->get_si());
      }
    }
  }

  Interval operator()(long long q) const {
    Interval qi = Interval::from_integer(mpz_class(static_cast<long>(q)), prec_);
    if (int_tau_ >= 0) {
      Interval r = Interval::point_si(1, prec_);
      for (int i = 0; i < int_tau_; ++i) r = r * qi;
      return r;
    }
    return exp(tau_ * log(qi));
  }

 private:
  mpfr_prec_t prec_;
  Interval tau_;
  int int_tau_ = -1;
};

// q^tau * max_j dist(q alpha_j, Z) on enclosures.
Interval dc_value(const std::vector<Interval>& alphas, const PowerTable& pow_q, long long q) {
  Interval worst = dist_to_integer(mul_si(alphas[0], static_cast<long>(q)));
  for (std::size_t j = 1; j < alphas.size(); ++j) {
    worst = max(worst, dist_to_integer(mul_si(alphas[j], static_cast<long>(q))));
  }
  return worst * pow_q(q);
}

RealScalar dc_value_exact(const RotationVector& alpha, const RealScalar& tau, long long q) {
  const int prec = alpha[0].precision_bits();
  RealScalar qs = RealScalar::integer(static_cast<long>(q), prec);
  RealScalar worst = dist_to_integer(qs * alpha[0]);
  for (std::size_t j = 1; j < alpha.size(); ++j) worst = max(worst, dist_to_integer(qs * alpha[j]));
  return worst * pow(qs, tau);
}

struct ScanChunk {
  std::optional<Interval> min;  // enclosure of the chunk minimum
  long long arg = 0;            // smallest q with the smallest midpoint
  BigFloat arg_mid{64};
  long long first_violation = 0;
};

constexpr std::size_t kScanChunks = 64;

// One pass over 1 <= q <= q_max.  When `c` is given, each q is also decided
// against it.
std::vector<ScanChunk> dc_scan(const RotationVector& alpha, const RealScalar& tau,
                               long long q_max, const RealScalar* c,
                               const ScanOptions& options, mpfr_prec_t prec) {
  std::vector<Interval> alphas;
  for (const auto& a : alpha.values()) alphas.push_back(a.at_precision(static_cast<int>(prec)).enclosure());
  PowerTable pow_q(tau, prec);
  std::optional<Interval> c_enc;
  if (c) c_enc = c->at_precision(static_cast<int>(prec)).enclosure();

  const std::size_t chunks = std::min<std::size_t>(kScanChunks, static_cast<std::size_t>(q_max));
  std::vector<ScanChunk> out(chunks);
  parallel_chunks(chunks, options.threads, [&](std::size_t ci) {
    const long long begin = 1 + static_cast<long long>(ci) * q_max / static_cast<long long>(chunks);
    const long long end = 1 + static_cast<long long>(ci + 1) * q_max / static_cast<long long>(chunks);
    ScanChunk& chunk = out[ci];
    chunk.arg_mid = BigFloat(prec);
    for (long long q = begin; q < end; ++q) {
      Interval v = dc_value(alphas, pow_q, q);
      BigFloat mid = v.mid();
      if (!chunk.min) {
        chunk.min = v;
        chunk.arg = q;
        chunk.arg_mid = std::move(mid);
      } else {
        chunk.min = min(*chunk.min, v);
        if (compare(mid, chunk.arg_mid) < 0) {
          chunk.arg = q;
          chunk.arg_mid = std::move(mid);
        }
      }
      if (c && chunk.first_violation == 0) {
        int s = (v - *c_enc).certain_sign();
        if (s != 1 && s != 0 && s != -1) {
          // Close call: decide on the exact expression.
          s = certified_compare(dc_value_exact(alpha, tau, q), *c, options.precision);
        }
        if (s < 0) chunk.first_violation = q;
      }
    }
  });
  return out;
}

struct ScanSummary {
  Interval min;
  long long arg;
  long long first_violation;
};

ScanSummary reduce(std::vector<ScanChunk> chunks) {
  ScanSummary s{*chunks.front().min, chunks.front().arg, chunks.front().first_violation};
  BigFloat best_mid = std::move(chunks.front().arg_mid);
  for (std::size_t i = 1; i < chunks.size(); ++i) {
    ScanChunk& c = chunks[i];
    s.min = min(s.min, *c.min);
    if (compare(c.arg_mid, best_mid) < 0) {
      s.arg = c.arg;
      best_mid = std::move(c.arg_mid);
    }
    if (s.first_violation == 0) s.first_violation = c.first_violation;
  }
  return s;
}

DcWitness make_dc_witness(const RotationVector& alpha, const RealScalar& tau, long long q,
                          const RealScalar* c, const PrecisionPolicy& policy) {
  DcWitness w;
  w.q = q;
  const int prec = alpha[0].precision_bits();
  RealScalar qs = RealScalar::integer(static_cast<long>(q), prec);
  for (const auto& a : alpha.values()) {
    try {
      w.p.push_back(certified_round(qs * a, policy));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ExactTie) throw;
      // q alpha_j sits on a half-integer; both neighbors are equally close.
      w.p.push_back(certified_floor(qs * a, policy));
    }
  }
  w.value = dc_value_exact(alpha, tau, q);
  w.margin = c ? w.value - *c : w.value;
  return w;
}

}  // namespace

DcCheckResult dc_check(const RotationVector& alpha, const RealScalar& c, const RealScalar& tau,
                       long long q_max, const ScanOptions& options) {
  require_positive(c, "C", options.precision);
  require_positive(tau, "tau", options.precision);
  if (q_max < 1) throw Error(ErrorKind::InvalidInput, "Q_max must be >= 1");
  const mpfr_prec_t prec = alpha[0].precision_bits();
  ScanSummary s = reduce(dc_scan(alpha, tau, q_max, &c, options, prec));
  DcCheckResult r;
  r.first_violation = s.first_violation;
  r.holds = s.first_violation == 0;
  r.witness = make_dc_witness(alpha, tau, s.arg, &c, options.precision);
  return r;
}

DcEstimate dc_estimate(const RotationVector& alpha, const RealScalar& tau, long long q_max,
                       const ScanOptions& options) {
  require_positive(tau, "tau", options.precision);
  if (q_max < 1) throw Error(ErrorKind::InvalidInput, "Q_max must be >= 1");
  const int prec = alpha[0].precision_bits();
  ScanSummary s = reduce(dc_scan(alpha, tau, q_max, nullptr, options, prec));
  // The minimum as a lazy real: refinement reruns the scan.
  auto eval = [alpha, tau, q_max, options](mpfr_prec_t p) {
    return reduce(dc_scan(alpha, tau, q_max, nullptr, options, p)).min;
  };
  RealScalar value = RealScalar::computed(eval, prec);
  return {value, s.arg};
}

double transference(int n, double tau, TransferenceDirection direction) {
  if (n < 1) throw Error(ErrorKind::InvalidInput, "N must be >= 1");
  if (!std::isfinite(tau)) throw Error(ErrorKind::InvalidInput, "exponent must be finite");
  if (direction == TransferenceDirection::Forward) {
    if (tau <= 0) throw Error(ErrorKind::InvalidInput, "tau must be positive");
    return n * tau + n - 1;
  }
  double r = (tau + 1 - n) / n;
  if (r <= 0) throw Error(ErrorKind::DomainError, "inverse transference exponent is not positive");
  return r;
}

RealScalar transference(int n, const RealScalar& tau, TransferenceDirection direction,
                        const PrecisionPolicy& policy) {
  if (n < 1) throw Error(ErrorKind::InvalidInput, "N must be >= 1");
  const int prec = tau.precision_bits();
  RealScalar nn = RealScalar::integer(n, prec);
  RealScalar shift = RealScalar::integer(n - 1, prec);
  if (direction == TransferenceDirection::Forward) {
    require_positive(tau, "tau", policy);
    return nn * tau + shift;
  }
  RealScalar r = (tau - shift) / nn;
  if (certified_sign(r, policy) <= 0) {
    throw Error(ErrorKind::DomainError, "inverse transference exponent is not positive");
  }
  return r;
}

namespace {

struct DualCandidate {
  long double ratio = std::numeric_limits<long double>::infinity();
  long long q = 0;
  std::vector<long long> p;
};

bool lex_less(long long q1, const std::vector<long long>& p1, long long q2,
              const std::vector<long long>& p2) {
  if (q1 != q2) return q1 < q2;
  return p1 < p2;
}

struct DualChunk {
  long long scanned = 0;
  DualCandidate best;
  std::optional<DualCandidate> violation;  // lexicographically first
};

DualWitness make_dual_witness(const RotationVector& alpha, const RealScalar& tau_prime,
                              long long q, const std::vector<long long>& p) {
  const int prec = alpha[0].precision_bits();
  RealScalar dot = RealScalar::integer(static_cast<long>(q), prec);
  long long norm = std::llabs(q);
  for (std::size_t j = 0; j < p.size(); ++j) {
    dot = dot + RealScalar::integer(static_cast<long>(p[j]), prec) * alpha[j];
    norm = std::max(norm, std::llabs(p[j]));
  }
  DualWitness w{p, q, norm, abs(dot), {}};
  w.ratio = w.value * pow(RealScalar::integer(static_cast<long>(norm), prec), tau_prime);
  return w;
}

}  // namespace

DualCheckResult dual_form_check(const RotationVector& alpha, const RealScalar& c_prime,
                                const RealScalar& tau_prime, long long k_max,
                                const ScanOptions& options) {
  require_positive(c_prime, "C'", options.precision);
  require_positive(tau_prime, "tau'", options.precision);
  if (k_max < 1) throw Error(ErrorKind::InvalidInput, "K_max must be >= 1");
  const std::size_t n = alpha.size();
  const long long side = 2 * k_max + 1;
  long double cube = 1;
  for (std::size_t j = 0; j < n; ++j) {
    cube *= side;
    if (cube > 1e12L) throw Error(ErrorKind::InvalidInput, "dual scan is too large");
  }
  const long long per_q = static_cast<long long>(cube);
  const long long total = (k_max + 1) * per_q;

  std::vector<long double> a;
  for (const auto& x : alpha.values()) a.push_back(x.enclosure().mid().to_long_double());
  const long double tp = static_cast<long double>(tau_prime.to_double());
  const long double cp = static_cast<long double>(c_prime.to_double());
  std::vector<long double> norm_pow(static_cast<std::size_t>(k_max) + 1);
  for (long long k = 1; k <= k_max; ++k) norm_pow[k] = std::pow(static_cast<long double>(k), tp);
  // Error of the long double dot product, relative to the sup norm.
  const long double eps = std::numeric_limits<long double>::epsilon();
  const long double dot_err_per_norm = 4 * (n + 2) * eps;
  const long double rel_err = 64 * eps * (1 + std::fabs(tp) * std::log(static_cast<long double>(k_max) + 1));

  const std::size_t chunks = static_cast<std::size_t>(std::min<long long>(256, total));
  std::vector<DualChunk> out(chunks);
  parallel_chunks(chunks, options.threads, [&](std::size_t ci) {
    const long long begin = static_cast<long long>(ci) * total / static_cast<long long>(chunks);
    const long long end = static_cast<long long>(ci + 1) * total / static_cast<long long>(chunks);
    DualChunk& chunk = out[ci];
    std::vector<long long> p(n);
    for (long long idx = begin; idx < end; ++idx) {
      long long q = idx / per_q;
      long long rest = idx % per_q;
      for (std::size_t j = n; j-- > 0;) {
        p[j] = rest % side - k_max;
        rest /= side;
      }
      long long norm = q;
      long long first_nonzero = 0;
      for (std::size_t j = 0; j < n; ++j) {
        norm = std::max(norm, std::llabs(p[j]));
        if (first_nonzero == 0) first_nonzero = p[j];
      }
      if (norm == 0) continue;
      if (q == 0 && first_nonzero < 0) continue;  // v and -v give the same value
      ++chunk.scanned;
      long double dot = static_cast<long double>(q);
      for (std::size_t j = 0; j < n; ++j) dot += static_cast<long double>(p[j]) * a[j];
      long double value = std::fabs(dot);
      long double err = dot_err_per_norm * norm;
      long double ratio = value * norm_pow[norm];
      if (ratio < chunk.best.ratio ||
          (ratio == chunk.best.ratio && lex_less(q, p, chunk.best.q, chunk.best.p))) {
        chunk.best = {ratio, q, p};
      }
      if (chunk.violation) continue;
      long double threshold = cp / norm_pow[norm];
      int s;
      if (value - err > threshold * (1 + rel_err)) {
        s = 1;
      } else if (value + err < threshold * (1 - rel_err)) {
        s = -1;
      } else {
        DualWitness w = make_dual_witness(alpha, tau_prime, q, p);
        s = certified_compare(w.ratio, c_prime, options.precision);
      }
      if (s < 0) chunk.violation = DualCandidate{ratio, q, p};
    }
  });

  DualCheckResult r;
  DualCandidate best;
  std::optional<DualCandidate> violation;
  for (auto& c : out) {
    r.vectors_scanned += 2 * c.scanned;  // each evaluation covers v and -v
    if (c.best.p.size() == n &&
        (c.best.ratio < best.ratio ||
         (c.best.ratio == best.ratio && lex_less(c.best.q, c.best.p, best.q, best.p)))) {
      best = c.best;
    }
    if (!violation && c.violation) violation = c.violation;
  }
  r.holds = !violation;
  r.witness = make_dual_witness(alpha, tau_prime, best.q, best.p);
  if (violation) r.first_violation = make_dual_witness(alpha, tau_prime, violation->q, violation->p);
  return r;
}

std::string to_string(SelectorMode m) { return m == SelectorMode::Proof ? "proof" : "greedy"; }

AppendixWordTrace select_word_appendix(const RotationVector& alpha, const RealScalar& c,
                                       const RealScalar& tau, int depth, SelectorMode mode,
                                       const SelectorOptions& options) {
  const PrecisionPolicy& policy = options.precision;
  if (depth < 1) throw Error(ErrorKind::InvalidInput, "depth must be >= 1");
  require_positive(c, "C", policy);
  require_positive(tau, "tau", policy);
  const std::size_t n_dim = alpha.size();
  if (options.start < 1 || static_cast<std::size_t>(options.start) > n_dim) {
    throw Error(ErrorKind::InvalidInput, "start index outside 1..N");
  }
  const int prec = alpha[0].precision_bits();
  const RealScalar one = RealScalar::integer(1, prec);
  const RealScalar half = RealScalar::rational(mpq_class(1, 2), prec);

  AppendixWordTrace trace;
  trace.mode = mode;
  trace.recursion_k = options.recursion_k.value_or(one);
  require_positive(trace.recursion_k, "k", policy);
  trace.tau_prime = transference(static_cast<int>(n_dim), tau, TransferenceDirection::Forward, policy);
  const RealScalar tau_exp = trace.tau_prime - one;

  std::vector<GaussStep> orbit;
  RotationVector state = alpha;
  RealScalar c_n = c;
  int w = options.start;
  std::optional<RealScalar> kappa;
  for (int n = 0; n < depth; ++n) {
    trace.word.push_back(w);
    GaussStep step = gauss_step(state, w, policy);
    const RealScalar& pivot = state.letter(w);
    AppendixStep row;
    row.w = w;
    row.q = step.a[w - 1];
    RealScalar qs = RealScalar::integer(static_cast<long>(row.q), prec);
    row.beta = one / pivot - qs;
    row.c_n = c_n;
    row.threshold = c_n / pow(qs, tau);
    row.pivot_alpha = pivot;

    if (n_dim == 1) {
      row.j = 1;
      row.rule = "single";
    } else if (mode == SelectorMode::Greedy) {
      int best = 1;
      for (std::size_t i = 2; i <= n_dim; ++i) {
        if (certified_compare(step.image.letter(static_cast<int>(i)), step.image.letter(best), policy) > 0) {
          best = static_cast<int>(i);
        }
      }
      row.j = best;
      row.rule = "greedy";
    } else {
      // |1 - q alpha_w| = image_w * alpha_w
      if (certified_compare(step.image.letter(w) * pivot, row.threshold, policy) >= 0) {
        row.j = w;
        row.rule = "pivot";
      } else {
        for (std::size_t k = 1; k <= n_dim && row.k == 0; ++k) {
          if (static_cast<int>(k) == w) continue;
          RealScalar dev =
              abs(qs * state[k - 1] - RealScalar::integer(static_cast<long>(step.a[k - 1]), prec));
          if (certified_compare(dev, row.threshold, policy) >= 0) row.k = static_cast<int>(k);
        }
        if (row.k == 0) {
          throw Error(ErrorKind::SelectorFailed,
                      "no index passes the Diophantine test at depth " + std::to_string(n) +
                          " (q = " + std::to_string(row.q) + ")");
        }
        RealScalar lhs = state[row.k - 1] * abs(row.beta);
        if (certified_compare(lhs, half * row.threshold, policy) <= 0) {
          row.j = row.k;
          row.rule = "transverse";
        } else {
          row.j = w;
          row.rule = "pivot-fallback";
        }
      }
    }
    row.next_alpha = step.image.letter(row.j);
    RealScalar ratio = row.next_alpha / (c_n * pow(pivot, tau));
    kappa = kappa ? min(*kappa, ratio) : ratio;

    c_n = trace.recursion_k * c_n * pow(pivot, tau_exp);
    state = step.image;
    w = row.j;
    orbit.push_back(std::move(step));
    trace.steps.push_back(std::move(row));
  }
  trace.kappa = *kappa;
  trace.envelope_k = min(min(trace.recursion_k, trace.kappa), one);
  trace.tau_double_prime = max(tau, tau_exp);
  trace.brjuno = brjuno_partial(alpha, trace.word, orbit, BrjunoVariant::B);

  const RealScalar log_inv_k = -log(trace.envelope_k);
  const RealScalar log_inv_c = -log(c);
  trace.envelope_holds = true;
  for (int m = 1; m < depth; ++m) {
    const BrjunoTerm& term = trace.brjuno.terms[m];
    EnvelopeRow row;
    row.depth = m;
    row.increment = term.value;
    row.envelope = term.product * (RealScalar::integer(m, prec) * log_inv_k + log_inv_c +
                                   trace.tau_double_prime * -log(term.product));
    int s;
    try {
      s = certified_compare(row.increment, row.envelope, policy);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::UndecidableAtPrecision) throw;
      s = 0;  // equal to working precision
    }
    row.within = s <= 0;
    trace.envelope_holds = trace.envelope_holds && row.within;
    trace.envelope.push_back(std::move(row));
  }
  return trace;
}

}  // namespace siegel
