#pragma once

// Simultaneous Diophantine conditions.
//
// DC_N(C, tau): max_j |q alpha_j - p_j| >= C / q^tau for all q != 0.
// Dual form:   |(alpha, 1) . (p, q)| >= C' / ||(p, q)||_inf^tau' for all
//              nonzero integer vectors, with tau' = N tau + N - 1.
//
// Scans are finite (q <= Q_max, ||k|| <= K_max); they test the conditions,
// they do not prove membership.

#include <optional>
#include <string>
#include <vector>

#include "siegel/brjuno.hpp"
#include "siegel/gauss.hpp"
#include "siegel/real.hpp"

namespace siegel {

struct ScanOptions {
  unsigned threads = 1;
  PrecisionPolicy precision;
};

struct DcWitness {
  long long q = 0;
  std::vector<long long> p;
  RealScalar value;   // q^tau * max_j dist(q alpha_j, Z)
  RealScalar margin;  // value - C
};

struct DcCheckResult {
  bool holds = false;
  DcWitness witness;  // the q with the smallest value
  long long first_violation = 0;  // smallest failing q, 0 if none
};

struct DcEstimate {
  RealScalar value;  // min over q <= Q_max of q^tau max_j dist(q alpha_j, Z)
  long long q = 0;   // where the minimum is attained
};

DcCheckResult dc_check(const RotationVector& alpha, const RealScalar& c, const RealScalar& tau,
                       long long q_max, const ScanOptions& options = {});

DcEstimate dc_estimate(const RotationVector& alpha, const RealScalar& tau, long long q_max,
                       const ScanOptions& options = {});

enum class TransferenceDirection { Forward, Inverse };

// Forward: tau' = N tau + N - 1.  Inverse: tau = (tau' + 1 - N) / N.
double transference(int n, double tau, TransferenceDirection direction);
RealScalar transference(int n, const RealScalar& tau, TransferenceDirection direction,
                        const PrecisionPolicy& policy = {});

struct DualWitness {
  std::vector<long long> p;
  long long q = 0;
  long long norm = 0;
  RealScalar value;  // |alpha . p + q|
  RealScalar ratio;  // value * norm^tau'
};

struct DualCheckResult {
  bool holds = false;
  long long vectors_scanned = 0;  // nonzero vectors covered, counting v and -v
  DualWitness witness;  // the vector with the smallest ratio
  std::optional<DualWitness> first_violation;
};

DualCheckResult dual_form_check(const RotationVector& alpha, const RealScalar& c_prime,
                                const RealScalar& tau_prime, long long k_max,
                                const ScanOptions& options = {});

enum class SelectorMode { Proof, Greedy };

std::string to_string(SelectorMode m);

struct AppendixStep {
  int w = 0;
  long long q = 0;       // nearest integer to 1/alpha_w
  RealScalar beta;       // 1/alpha_w - q; |beta| = image_w
  RealScalar c_n;        // class constant carried to this depth
  RealScalar threshold;  // c_n / q^tau
  int j = 0;             // next pivot
  int k = 0;             // transverse index tested (proof mode), 0 if unused
  std::string rule;      // "pivot", "transverse", "pivot-fallback" or "greedy"
  RealScalar pivot_alpha;  // alpha^(n)_{w(n)}
  RealScalar next_alpha;   // alpha^(n+1)_{j}
};

struct EnvelopeRow {
  int depth = 0;
  RealScalar increment;  // pi_m log(1/alpha^(m)_{w(m)})
  RealScalar envelope;   // pi_m (m log(1/k) + log(1/C) + tau'' log(1/pi_m))
  bool within = false;
};

struct AppendixWordTrace {
  Word word;
  SelectorMode mode = SelectorMode::Proof;
  std::vector<AppendixStep> steps;
  RealScalar recursion_k;  // k in C_{n+1} = k C_n (alpha^(n)_{w(n)})^(tau'-1)
  RealScalar tau_prime;
  // min_n alpha^(n+1)_{w(n+1)} / (C_n (alpha^(n)_{w(n)})^tau), fitted, not assumed.
  RealScalar kappa;
  // min(k, kappa, 1); the constant the envelope is evaluated with.
  RealScalar envelope_k;
  RealScalar tau_double_prime;
  std::vector<EnvelopeRow> envelope;  // depths 1 .. |word|-1
  bool envelope_holds = false;
  BrjunoSum brjuno;  // B along the word
};

struct SelectorOptions {
  int start = 1;
  // Recursion constant; defaults to 1.
  std::optional<RealScalar> recursion_k;
  PrecisionPolicy precision;
};

AppendixWordTrace select_word_appendix(const RotationVector& alpha, const RealScalar& c,
                                       const RealScalar& tau, int depth, SelectorMode mode,
                                       const SelectorOptions& options = {});

}  // namespace siegel
