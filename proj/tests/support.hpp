#pragma once

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "siegel/errors.hpp"
#include "siegel/gauss.hpp"
#include "siegel/real.hpp"
#include "siegel/surd.hpp"

namespace testing_support {

inline siegel::SurdNumber to_surd(const oracle::Quad& x) {
  return siegel::SurdNumber(x.a) + siegel::SurdNumber(x.b) * siegel::SurdNumber::sqrt_of(x.d);
}

inline siegel::RealScalar real(const oracle::Quad& x, int prec = 128) {
  return siegel::RealScalar::exact(to_surd(x), prec);
}

inline mpq_class to_q(const siegel::BigFloat& x) {
  mpq_class q;
  mpfr_get_q(q.get_mpq_t(), x.get());
  return q;
}

// Exact check that the enclosure of x contains the quadratic number v.
inline bool contains(const siegel::Interval& x, const oracle::Quad& v) {
  if (x.lo().is_inf() || x.hi().is_inf()) {
    return (x.lo().is_inf() || oracle::compare(v, to_q(x.lo())) >= 0) &&
           (x.hi().is_inf() || oracle::compare(v, to_q(x.hi())) <= 0);
  }
  return oracle::compare(v, to_q(x.lo())) >= 0 && oracle::compare(v, to_q(x.hi())) <= 0;
}

inline bool same_value(const siegel::RealScalar& x, const siegel::SurdNumber& v) {
  const siegel::SurdNumber* e = x.exact_value();
  return e != nullptr && (*e - v).is_zero();
}

template <class F>
siegel::ErrorKind error_kind(F&& f) {
  try {
    f();
  } catch (const siegel::Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected a siegel::Error";
  return siegel::ErrorKind::DomainError;
}

}  // namespace testing_support
