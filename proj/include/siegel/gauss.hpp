#pragma once

// The Gauss map on N-tuples of fractions.
//
// Given alpha = (alpha_1, ..., alpha_N) in (0,1)^N and a pivot w, put
// hat_i = alpha_i for i != w and hat_w = 1, let a_i be the integer nearest to
// hat_i / alpha_w, and map to
//
//   image_i = |a_i alpha_w - hat_i| / alpha_w  in (0, 1/2),
//   eps_i   = sgn(a_i alpha_w - hat_i).
//
// For N = 1 this is the nearest-integer continued fraction map.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "siegel/real.hpp"

namespace siegel {

// Pivot sequence; letters are 1-based indices into the tuple.
using Word = std::vector<int>;

struct GaussStep;

class RotationVector {
 public:
  // Requires every entry certified in (0, 1).
  explicit RotationVector(std::vector<RealScalar> alphas, const PrecisionPolicy& policy = {});

  // Reduces entries mod 1 first; each reduction is reported in `notes`.
  static RotationVector normalized(std::vector<RealScalar> values, std::vector<std::string>* notes,
                                   const PrecisionPolicy& policy = {});

  std::size_t size() const { return alphas_.size(); }
  const RealScalar& operator[](std::size_t i) const { return alphas_[i]; }
  const RealScalar& letter(int w) const { return alphas_.at(static_cast<std::size_t>(w - 1)); }
  std::span<const RealScalar> values() const { return alphas_; }
  bool all_exact() const;

 private:
  struct Unchecked {};
  RotationVector(std::vector<RealScalar> alphas, Unchecked) : alphas_(std::move(alphas)) {}
  friend GaussStep gauss_step(const RotationVector&, int, const PrecisionPolicy&);

  std::vector<RealScalar> alphas_;
};

struct GaussStep {
  int w = 0;
  std::vector<long long> a;
  std::vector<int> eps;
  RotationVector image;
  std::vector<RealScalar> hatted;
};

GaussStep gauss_step(const RotationVector& alpha, int w, const PrecisionPolicy& policy = {});

// step[0] = G(alpha, word[0]), step[n] = G(step[n-1].image, word[n]).
std::vector<GaussStep> gauss_orbit(const RotationVector& alpha, const Word& word,
                                   const PrecisionPolicy& policy = {});

void check_word(const Word& word, std::size_t n);

}  // namespace siegel
