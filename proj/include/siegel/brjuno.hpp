#pragma once

// Multivariable Brjuno-type sums along words, their finite-depth minimum over
// all words, and the derived height and radius bounds.
//
// Along a word w with orbit alpha^(0) = alpha, alpha^(n+1) = G(alpha^(n), w(n)),
// and products pi_0 = 1, pi_{n+1} = pi_n * alpha^(n)_{w(n)}:
//
//   B  = sum_n pi_n * log(1 / alpha^(n)_{w(n)})
//   B' = sum_n pi_n * log(log(e / alpha^(n)_{w(n)}))
//
// Every summand is positive on (0,1), so a prefix sum bounds all of its
// extensions from below.

#include <string>
#include <vector>

#include "siegel/constants.hpp"
#include "siegel/gauss.hpp"
#include "siegel/real.hpp"

namespace siegel {

enum class BrjunoVariant { B, BPrime };

std::string to_string(BrjunoVariant v);

struct BrjunoTerm {
  int depth;
  RealScalar product;  // pi_depth
  RealScalar value;    // pi_depth * summand(alpha^(depth)_{w(depth)})
};

struct BrjunoSum {
  BrjunoVariant variant;
  Word word;
  std::vector<BrjunoTerm> terms;
  RealScalar value;
  int depth = 0;
};

// log(1/x) for B, log(log(e/x)) = log(1 - log x) for B'.
RealScalar brjuno_summand(const RealScalar& x, BrjunoVariant variant);

BrjunoSum brjuno_partial(const RotationVector& alpha, const Word& word, BrjunoVariant variant,
                         const PrecisionPolicy& policy = {});

// Same sum over an orbit that has already been computed for `word`.
BrjunoSum brjuno_partial(const RotationVector& alpha, const Word& word,
                         const std::vector<GaussStep>& orbit, BrjunoVariant variant);

struct SearchOptions {
  unsigned threads = 1;
  PrecisionPolicy precision;
};

struct ExcludedPrefix {
  Word prefix;
  std::string reason;
};

struct WordSearchResult {
  Word best_word;
  RealScalar best_value;
  long long nodes_expanded = 0;
  // best_value is the minimum over all N^depth words (none were excluded).
  bool proof = false;
  std::vector<ExcludedPrefix> excluded;
};

// Minimum of the partial sum over all words of length `depth`, by best-first
// branch and bound.  best_word and best_value do not depend on `threads`.
WordSearchResult brjuno_minimize(const RotationVector& alpha, int depth, BrjunoVariant variant,
                                 const SearchOptions& options = {});

enum class HeightRegime { Log, LogLog };

std::string to_string(HeightRegime r);

// sum_j pi_j t(alpha^(j)_{w(j)}) + c_prime, with
//   t(a) = log(1/a)/(2 pi) + c_univ   (Log)
//   t(a) = log(log(e/a))/(2 pi)       (LogLog)
RealScalar height_bound(const RotationVector& alpha, const Word& word, HeightRegime regime,
                        const ConstantsConfig& consts, const PrecisionPolicy& policy = {});

// c_radius * exp(-2 pi b)
RealScalar siegel_radius_bound(const RealScalar& b_value, const ConstantsConfig& consts,
                               const PrecisionPolicy& policy = {});

}  // namespace siegel
