#pragma once

// Real numbers as outward-rounded enclosures that can be re-evaluated at
// higher precision on demand.
//
// A RealScalar is a node in an immutable expression DAG plus the enclosure of
// that node at the scalar's current precision.  Leaves are exact SurdNumber
// values or constants; arithmetic between two exact operands stays exact so
// sign and rounding decisions on them never depend on precision.

#include <functional>
#include <memory>
#include <mutex>
#include <string>

#include "siegel/interval.hpp"
#include "siegel/surd.hpp"

namespace siegel {

inline constexpr int kDefaultPrecisionBits = 128;
inline constexpr int kDefaultMaxPrecisionBits = 4096;

struct PrecisionPolicy {
  int initial_bits = kDefaultPrecisionBits;
  int max_bits = kDefaultMaxPrecisionBits;
};

class RealNode {
 public:
  virtual ~RealNode() = default;
  Interval enclose(mpfr_prec_t prec) const;
  virtual const SurdNumber* exact() const { return nullptr; }

 protected:
  virtual Interval evaluate(mpfr_prec_t prec) const = 0;

 private:
  struct Cached {
    mpfr_prec_t prec;
    Interval enclosure;
  };
  mutable std::mutex mutex_;
  mutable std::shared_ptr<const Cached> cached_;
};

class RealScalar {
 public:
  RealScalar();  // exact zero

  static RealScalar exact(SurdNumber value, int prec = kDefaultPrecisionBits);
  static RealScalar integer(long value, int prec = kDefaultPrecisionBits);
  static RealScalar rational(const mpq_class& value, int prec = kDefaultPrecisionBits);
  // The binary value of `value`, exactly.
  static RealScalar from_double(double value, int prec = kDefaultPrecisionBits);
  static RealScalar pi(int prec = kDefaultPrecisionBits);
  // A value defined by an enclosure procedure; `eval(p)` must contain the
  // same real for every p and shrink as p grows.
  static RealScalar computed(std::function<Interval(mpfr_prec_t)> eval,
                             int prec = kDefaultPrecisionBits);
  static RealScalar from_node(std::shared_ptr<const RealNode> node, int prec);

  const Interval& enclosure() const { return enclosure_; }
  const BigFloat& lo() const { return enclosure_.lo(); }
  const BigFloat& hi() const { return enclosure_.hi(); }
  BigFloat width() const { return enclosure_.width(); }
  double width_double() const { return enclosure_.width().to_double(MPFR_RNDU); }
  int precision_bits() const { return precision_; }
  const std::shared_ptr<const RealNode>& node() const { return node_; }

  bool is_exact() const { return node_->exact() != nullptr; }
  const SurdNumber* exact_value() const { return node_->exact(); }

  double to_double() const { return enclosure_.mid_double(); }
  // Same real, enclosure recomputed at `prec` bits.
  RealScalar at_precision(int prec) const;

 private:
  RealScalar(std::shared_ptr<const RealNode> node, int prec);

  std::shared_ptr<const RealNode> node_;
  int precision_;
  Interval enclosure_;
};

RealScalar operator+(const RealScalar& a, const RealScalar& b);
RealScalar operator-(const RealScalar& a, const RealScalar& b);
RealScalar operator*(const RealScalar& a, const RealScalar& b);
RealScalar operator/(const RealScalar& a, const RealScalar& b);
RealScalar operator-(const RealScalar& a);
RealScalar operator*(long k, const RealScalar& a);
RealScalar abs(const RealScalar& a);
RealScalar log(const RealScalar& a);
RealScalar exp(const RealScalar& a);
RealScalar sqrt(const RealScalar& a);
RealScalar min(const RealScalar& a, const RealScalar& b);
RealScalar max(const RealScalar& a, const RealScalar& b);
// base^exponent for base > 0; exact when the exponent is an exact integer
// and the base exact.
RealScalar pow(const RealScalar& base, const RealScalar& exponent);
// Distance to the nearest integer.
RealScalar dist_to_integer(const RealScalar& a);

// Enclosure of the same real with width <= target_width.
RealScalar refine(const RealScalar& x, double target_width, const PrecisionPolicy& policy = {});

// True sign of x.  Exact values are decided exactly; others are refined by
// doubling precision up to policy.max_bits.
int certified_sign(const RealScalar& x, const PrecisionPolicy& policy = {});

// Sign of a - b.
int certified_compare(const RealScalar& a, const RealScalar& b,
                      const PrecisionPolicy& policy = {});

// Nearest integer to x.  Throws ExactTie on a half-integer.
long long certified_round(const RealScalar& x, const PrecisionPolicy& policy = {});
long long certified_floor(const RealScalar& x, const PrecisionPolicy& policy = {});

// Decimal endpoints, rounded outward.
std::string lo_string(const RealScalar& x, int digits = 30);
std::string hi_string(const RealScalar& x, int digits = 30);

}  // namespace siegel
