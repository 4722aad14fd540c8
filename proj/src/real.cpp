#include "siegel/real.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "siegel/errors.hpp"

namespace siegel {

Interval RealNode::enclose(mpfr_prec_t prec) const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (cached_ && cached_->prec == prec) return cached_->enclosure;
  }
  Interval enc = evaluate(prec);
  std::lock_guard<std::mutex> lock(mutex_);
  cached_ = std::make_shared<const Cached>(Cached{prec, enc});
  return enc;
}

namespace {

class ExactNode final : public RealNode {
 public:
  explicit ExactNode(SurdNumber v) : value_(std::move(v)) {}
  const SurdNumber* exact() const override { return &value_; }

 protected:
  Interval evaluate(mpfr_prec_t prec) const override {
    // Large coefficients cancel; spend their size in guard bits.
    auto guard = static_cast<mpfr_prec_t>(value_.height_bits());
    return with_precision(value_.enclose(prec + guard), prec);
  }

 private:
  SurdNumber value_;
};

class PiNode final : public RealNode {
 protected:
  Interval evaluate(mpfr_prec_t prec) const override { return Interval::pi(prec); }
};

class ComputedNode final : public RealNode {
 public:
  explicit ComputedNode(std::function<Interval(mpfr_prec_t)> f) : f_(std::move(f)) {}

 protected:
  Interval evaluate(mpfr_prec_t prec) const override { return f_(prec); }

 private:
  std::function<Interval(mpfr_prec_t)> f_;
};

enum class UnaryOp { Neg, Abs, Log, Exp, Sqrt, Dist };

class UnaryNode final : public RealNode {
 public:
  UnaryNode(UnaryOp op, std::shared_ptr<const RealNode> x) : op_(op), x_(std::move(x)) {}

 protected:
  Interval evaluate(mpfr_prec_t prec) const override {
    Interval x = x_->enclose(prec);
    switch (op_) {
      case UnaryOp::Neg: return -x;
      case UnaryOp::Abs: return abs(x);
      case UnaryOp::Log: return log(x);
      case UnaryOp::Exp: return exp(x);
      case UnaryOp::Sqrt: return sqrt(x);
      case UnaryOp::Dist: return dist_to_integer(x);
    }
    return x;
  }

 private:
  UnaryOp op_;
  std::shared_ptr<const RealNode> x_;
};

enum class BinaryOp { Add, Sub, Mul, Div, Min, Max, Pow };

class BinaryNode final : public RealNode {
 public:
  BinaryNode(BinaryOp op, std::shared_ptr<const RealNode> a, std::shared_ptr<const RealNode> b)
      : op_(op), a_(std::move(a)), b_(std::move(b)) {}

 protected:
  Interval evaluate(mpfr_prec_t prec) const override {
    Interval a = a_->enclose(prec);
    Interval b = b_->enclose(prec);
    switch (op_) {
      case BinaryOp::Add: return a + b;
      case BinaryOp::Sub: return a - b;
      case BinaryOp::Mul: return a * b;
      case BinaryOp::Div: return a / b;
      case BinaryOp::Min: return min(a, b);
      case BinaryOp::Max: return max(a, b);
      case BinaryOp::Pow: return exp(b * log(a));
    }
    return a;
  }

 private:
  BinaryOp op_;
  std::shared_ptr<const RealNode> a_, b_;
};

int join(const RealScalar& a, const RealScalar& b) {
  return std::max(a.precision_bits(), b.precision_bits());
}

RealScalar unary(UnaryOp op, const RealScalar& x) {
  return RealScalar::from_node(std::make_shared<UnaryNode>(op, x.node()), x.precision_bits());
}

RealScalar binary(BinaryOp op, const RealScalar& a, const RealScalar& b) {
  return RealScalar::from_node(std::make_shared<BinaryNode>(op, a.node(), b.node()), join(a, b));
}

bool both_exact(const RealScalar& a, const RealScalar& b) { return a.is_exact() && b.is_exact(); }

int next_precision(int p, const PrecisionPolicy& policy) {
  if (p >= policy.max_bits) return 0;
  return std::min(2 * p, policy.max_bits);
}

}  // namespace

RealScalar::RealScalar() : RealScalar(std::make_shared<ExactNode>(SurdNumber()), kDefaultPrecisionBits) {}

RealScalar::RealScalar(std::shared_ptr<const RealNode> node, int prec)
    : node_(std::move(node)), precision_(prec), enclosure_(node_->enclose(prec)) {}

RealScalar RealScalar::exact(SurdNumber value, int prec) {
  return RealScalar(std::make_shared<ExactNode>(std::move(value)), prec);
}

RealScalar RealScalar::integer(long value, int prec) { return exact(SurdNumber(value), prec); }

RealScalar RealScalar::rational(const mpq_class& value, int prec) {
  return exact(SurdNumber(value), prec);
}

RealScalar RealScalar::from_double(double value, int prec) {
  if (!std::isfinite(value)) throw Error(ErrorKind::InvalidInput, "non-finite real");
  mpq_class q(value);
  return exact(SurdNumber(q), prec);
}

RealScalar RealScalar::pi(int prec) { return RealScalar(std::make_shared<PiNode>(), prec); }

RealScalar RealScalar::computed(std::function<Interval(mpfr_prec_t)> eval, int prec) {
  return RealScalar(std::make_shared<ComputedNode>(std::move(eval)), prec);
}

RealScalar RealScalar::from_node(std::shared_ptr<const RealNode> node, int prec) {
  return RealScalar(std::move(node), prec);
}

RealScalar RealScalar::at_precision(int prec) const { return RealScalar(node_, prec); }

RealScalar operator+(const RealScalar& a, const RealScalar& b) {
  if (both_exact(a, b)) return RealScalar::exact(*a.exact_value() + *b.exact_value(), join(a, b));
  return binary(BinaryOp::Add, a, b);
}

RealScalar operator-(const RealScalar& a, const RealScalar& b) {
  if (both_exact(a, b)) return RealScalar::exact(*a.exact_value() - *b.exact_value(), join(a, b));
  return binary(BinaryOp::Sub, a, b);
}

RealScalar operator*(const RealScalar& a, const RealScalar& b) {
  if (both_exact(a, b)) return RealScalar::exact(*a.exact_value() * *b.exact_value(), join(a, b));
  return binary(BinaryOp::Mul, a, b);
}

RealScalar operator/(const RealScalar& a, const RealScalar& b) {
  if (both_exact(a, b)) return RealScalar::exact(*a.exact_value() / *b.exact_value(), join(a, b));
  return binary(BinaryOp::Div, a, b);
}

RealScalar operator-(const RealScalar& a) {
  if (a.is_exact()) return RealScalar::exact(-*a.exact_value(), a.precision_bits());
  return unary(UnaryOp::Neg, a);
}

RealScalar operator*(long k, const RealScalar& a) {
  return RealScalar::integer(k, a.precision_bits()) * a;
}

RealScalar abs(const RealScalar& a) {
  if (a.is_exact()) return RealScalar::exact(a.exact_value()->abs(), a.precision_bits());
  return unary(UnaryOp::Abs, a);
}

RealScalar log(const RealScalar& a) {
  if (a.is_exact()) {
    if (a.exact_value()->sign() <= 0) {
      throw Error(ErrorKind::DomainError, "logarithm of a nonpositive value");
    }
    if (*a.exact_value() == SurdNumber(1)) return RealScalar::integer(0, a.precision_bits());
  }
  return unary(UnaryOp::Log, a);
}

RealScalar exp(const RealScalar& a) {
  if (a.is_exact() && a.exact_value()->is_zero()) return RealScalar::integer(1, a.precision_bits());
  return unary(UnaryOp::Exp, a);
}

RealScalar sqrt(const RealScalar& a) {
  if (a.is_exact()) {
    if (a.exact_value()->sign() < 0) {
      throw Error(ErrorKind::DomainError, "square root of a negative value");
    }
    if (auto z = a.exact_value()->as_integer(); z && z->fits_ulong_p()) {
      return RealScalar::exact(SurdNumber::sqrt_of(z->get_ui()), a.precision_bits());
    }
  }
  return unary(UnaryOp::Sqrt, a);
}

RealScalar min(const RealScalar& a, const RealScalar& b) {
  if (both_exact(a, b)) {
    return (*a.exact_value() - *b.exact_value()).sign() <= 0 ? a : b;
  }
  return binary(BinaryOp::Min, a, b);
}

RealScalar max(const RealScalar& a, const RealScalar& b) {
  if (both_exact(a, b)) {
    return (*a.exact_value() - *b.exact_value()).sign() >= 0 ? a : b;
  }
  return binary(BinaryOp::Max, a, b);
}

RealScalar pow(const RealScalar& base, const RealScalar& exponent) {
  if (base.is_exact() && base.exact_value()->sign() <= 0) {
    throw Error(ErrorKind::DomainError, "pow requires a positive base");
  }
  if (both_exact(base, exponent)) {
    auto n = exponent.exact_value()->as_integer();
    if (n && abs(*n) <= 64) {
      long k = n->get_si();
      SurdNumber b = k < 0 ? base.exact_value()->inverse() : *base.exact_value();
      SurdNumber r(1);
      for (long e = std::labs(k); e > 0; e >>= 1) {
        if (e & 1) r *= b;
        b *= b;
      }
      return RealScalar::exact(std::move(r), join(base, exponent));
    }
  }
  return binary(BinaryOp::Pow, base, exponent);
}

RealScalar dist_to_integer(const RealScalar& a) {
  if (a.is_exact()) {
    auto k = a.exact_value()->nearest_integer();
    if (!k) return RealScalar::rational(mpq_class(1, 2), a.precision_bits());
    SurdNumber d = *a.exact_value() - SurdNumber(mpq_class(*k));
    return RealScalar::exact(d.abs(), a.precision_bits());
  }
  return unary(UnaryOp::Dist, a);
}

RealScalar refine(const RealScalar& x, double target_width, const PrecisionPolicy& policy) {
  if (!(target_width > 0)) throw Error(ErrorKind::InvalidInput, "target width must be positive");
  BigFloat target(64);
  mpfr_set_d(target.get(), target_width, MPFR_RNDD);
  RealScalar cur = x;
  for (;;) {
    if (cur.enclosure().is_bounded() && compare(cur.width(), target) <= 0) return cur;
    int next = next_precision(cur.precision_bits(), policy);
    if (next == 0) {
      throw Error(ErrorKind::PrecisionExhausted,
                  "enclosure wider than " + std::to_string(target_width) + " at " +
                      std::to_string(cur.precision_bits()) + " bits");
    }
    cur = cur.at_precision(next);
  }
}

int certified_sign(const RealScalar& x, const PrecisionPolicy& policy) {
  if (x.is_exact()) return x.exact_value()->sign();
  RealScalar cur = x;
  for (;;) {
    int s = cur.enclosure().certain_sign();
    if (s != 2) return s;
    int next = next_precision(cur.precision_bits(), policy);
    if (next == 0) {
      throw Error(ErrorKind::UndecidableAtPrecision,
                  "enclosure [" + lo_string(cur, 6) + ", " + hi_string(cur, 6) +
                      "] straddles zero at " + std::to_string(cur.precision_bits()) + " bits");
    }
    cur = cur.at_precision(next);
  }
}

int certified_compare(const RealScalar& a, const RealScalar& b, const PrecisionPolicy& policy) {
  return certified_sign(a - b, policy);
}

namespace {

long long to_long_long(const mpz_class& z) {
  if (!z.fits_slong_p()) throw Error(ErrorKind::DomainError, "integer part out of range");
  return z.get_si();
}

}  // namespace

long long certified_round(const RealScalar& x, const PrecisionPolicy& policy) {
  if (x.is_exact()) {
    auto k = x.exact_value()->nearest_integer();
    if (!k) throw Error(ErrorKind::ExactTie, "value is exactly a half-integer");
    return to_long_long(*k);
  }
  RealScalar cur = x;
  for (;;) {
    const Interval& enc = cur.enclosure();
    if (enc.is_bounded() && !contains_half_integer(enc)) {
      BigFloat r(enc.precision() + 2);
      mpfr_round(r.get(), enc.lo().get());
      mpz_class z;
      mpfr_get_z(z.get_mpz_t(), r.get(), MPFR_RNDN);
      return to_long_long(z);
    }
    if (enc.is_point()) throw Error(ErrorKind::ExactTie, "value is exactly a half-integer");
    int next = next_precision(cur.precision_bits(), policy);
    if (next == 0) {
      throw Error(ErrorKind::UndecidableAtPrecision,
                  "nearest integer undecided at " + std::to_string(cur.precision_bits()) + " bits");
    }
    cur = cur.at_precision(next);
  }
}

long long certified_floor(const RealScalar& x, const PrecisionPolicy& policy) {
  if (x.is_exact()) return to_long_long(x.exact_value()->floor());
  RealScalar cur = x;
  for (;;) {
    const Interval& enc = cur.enclosure();
    if (enc.is_bounded() && (!contains_integer(enc) || enc.is_point())) {
      BigFloat f(enc.precision() + 2);
      mpfr_floor(f.get(), enc.lo().get());
      mpz_class z;
      mpfr_get_z(z.get_mpz_t(), f.get(), MPFR_RNDN);
      return to_long_long(z);
    }
    int next = next_precision(cur.precision_bits(), policy);
    if (next == 0) {
      throw Error(ErrorKind::UndecidableAtPrecision,
                  "floor undecided at " + std::to_string(cur.precision_bits()) + " bits");
    }
    cur = cur.at_precision(next);
  }
}

std::string lo_string(const RealScalar& x, int digits) { return x.lo().to_string(digits, MPFR_RNDD); }

std::string hi_string(const RealScalar& x, int digits) { return x.hi().to_string(digits, MPFR_RNDU); }

}  // namespace siegel
