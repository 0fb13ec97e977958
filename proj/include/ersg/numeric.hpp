#pragma once

#include <cmath>
#include <limits>

#include "ersg/types.hpp"

namespace ersg {

// x*log(x) extended by continuity with 0*log(0) = 0
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// log(sum_i exp(v_i)) with the usual max shift so large inputs cannot overflow
template <class Derived>
typename Derived::Scalar log_sum_exp(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  const Scalar m = v.maxCoeff();
  return m + std::log((v.array() - m).exp().sum());
}

// softmax(logits): strictly positive, sums to one
template <class Derived>
VectorT<typename Derived::Scalar> softmax(const Eigen::MatrixBase<Derived>& logits) {
  using Scalar = typename Derived::Scalar;
  const Scalar m = logits.maxCoeff();
  VectorT<Scalar> p = (logits.array() - m).exp();
  p /= p.sum();
  return p;
}

// Shannon entropy -sum p log p in nats; zero entries contribute zero
template <class Derived>
typename Derived::Scalar entropy(const Eigen::MatrixBase<Derived>& p) {
  typename Derived::Scalar h = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) h -= xlogx(p(i));
  return h;
}

// shifts a log-weight vector so that log_sum_exp(result) == 0
template <class Derived>
VectorT<typename Derived::Scalar> log_normalize(const Eigen::MatrixBase<Derived>& logw) {
  return logw.array() - log_sum_exp(logw);
}

}  // namespace ersg
