#include "siegel/gauss.hpp"

#include "siegel/errors.hpp"

namespace siegel {

namespace {

void require_unit_interval(const RealScalar& x, std::size_t i, const PrecisionPolicy& policy) {
  if (certified_sign(x, policy) <= 0 ||
      certified_compare(x, RealScalar::integer(1), policy) >= 0) {
    throw Error(ErrorKind::DomainError,
                "alpha_" + std::to_string(i + 1) + " is not in (0, 1)");
  }
}

}  // namespace

RotationVector::RotationVector(std::vector<RealScalar> alphas, const PrecisionPolicy& policy)
    : alphas_(std::move(alphas)) {
  if (alphas_.empty()) throw Error(ErrorKind::InvalidInput, "empty rotation vector");
  for (std::size_t i = 0; i < alphas_.size(); ++i) require_unit_interval(alphas_[i], i, policy);
}

RotationVector RotationVector::normalized(std::vector<RealScalar> values,
                                          std::vector<std::string>* notes,
                                          const PrecisionPolicy& policy) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    long long k = certified_floor(values[i], policy);
    if (k != 0) {
      values[i] = values[i] - RealScalar::integer(k, values[i].precision_bits());
      if (notes) {
        notes->push_back("alpha_" + std::to_string(i + 1) + " reduced mod 1 (subtracted " +
                         std::to_string(k) + ")");
      }
    }
  }
  return RotationVector(std::move(values), policy);
}

bool RotationVector::all_exact() const {
  for (const auto& a : alphas_) {
    if (!a.is_exact()) return false;
  }
  return true;
}

void check_word(const Word& word, std::size_t n) {
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] < 1 || static_cast<std::size_t>(word[i]) > n) {
      throw Error(ErrorKind::InvalidInput, "word letter " + std::to_string(word[i]) +
                                               " at position " + std::to_string(i) +
                                               " outside 1.." + std::to_string(n));
    }
  }
}

GaussStep gauss_step(const RotationVector& alpha, int w, const PrecisionPolicy& policy) {
  const std::size_t n = alpha.size();
  check_word(Word{w}, n);
  const RealScalar& pivot = alpha.letter(w);
  const RealScalar one = RealScalar::integer(1, pivot.precision_bits());
  const RealScalar inv_pivot = one / pivot;

  GaussStep step{w, {}, {}, RotationVector({}, RotationVector::Unchecked{}), {}};
  std::vector<RealScalar> image;
  image.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const RealScalar& hat = (static_cast<int>(i) + 1 == w) ? one : alpha[i];
    // The integer nearest hat/alpha_w is the minimizer of |k alpha_w - hat|;
    // the certified rounding already compares against both neighbors.
    long long a;
    try {
      a = certified_round(hat * inv_pivot, policy);
    } catch (const Error& e) {
      throw e.with_context("coordinate " + std::to_string(i + 1));
    }
    RealScalar diff = RealScalar::integer(a, pivot.precision_bits()) * pivot - hat;
    int eps = certified_sign(diff, policy);
    if (eps == 0) {
      throw Error(ErrorKind::ExactTie, "coordinate " + std::to_string(i + 1) +
                                           " maps to 0 (rationally dependent input)");
    }
    image.push_back((eps > 0 ? diff : -diff) * inv_pivot);
    step.a.push_back(a);
    step.eps.push_back(eps);
    step.hatted.push_back(hat);
  }
  step.image = RotationVector(std::move(image), RotationVector::Unchecked{});
  return step;
}

std::vector<GaussStep> gauss_orbit(const RotationVector& alpha, const Word& word,
                                   const PrecisionPolicy& policy) {
  check_word(word, alpha.size());
  std::vector<GaussStep> steps;
  steps.reserve(word.size());
  for (std::size_t n = 0; n < word.size(); ++n) {
    const RotationVector& current = n == 0 ? alpha : steps.back().image;
    try {
      steps.push_back(gauss_step(current, word[n], policy));
    } catch (const Error& e) {
      throw e.with_context("depth " + std::to_string(n));
    }
  }
  return steps;
}

}  // namespace siegel
