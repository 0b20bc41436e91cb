#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <stdexcept>

namespace egosum {

/// Sparse count histogram. Colour histograms use 23^3 Lab bins, flow
/// histograms 61 bins per direction; both are raw counts.
using Histogram = Eigen::SparseVector<double>;

inline constexpr int kLabBinsPerChannel = 23;
inline constexpr int kColorBins = kLabBinsPerChannel * kLabBinsPerChannel * kLabBinsPerChannel;
inline constexpr int kFlowBinsPerDirection = 61;
inline constexpr int kFlowBins = 2 * kFlowBinsPerDirection;

/// Chi-square histogram distance 0.5 * sum (p - q)^2 / (p + q); bins where
/// p + q == 0 contribute nothing.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar chi_square(const Eigen::MatrixBase<DerivedA>& p,
                                     const Eigen::MatrixBase<DerivedB>& q) {
  using Scalar = typename DerivedA::Scalar;
  if (p.size() != q.size()) throw std::invalid_argument("chi_square: length mismatch");
  Scalar acc(0);
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const Scalar s = p(i) + q(i);
    if (s != Scalar(0)) {
      const Scalar d = p(i) - q(i);
      acc += d * d / s;
    }
  }
  return Scalar(0.5) * acc;
}

/// Sparse overload; walks the union of the two supports.
template <typename Scalar>
Scalar chi_square(const Eigen::SparseVector<Scalar>& p, const Eigen::SparseVector<Scalar>& q) {
  if (p.size() != q.size()) throw std::invalid_argument("chi_square: length mismatch");
  using It = typename Eigen::SparseVector<Scalar>::InnerIterator;
  It a(p), b(q);
  Scalar acc(0);
  auto term = [&acc](Scalar x, Scalar y) {
    const Scalar s = x + y;
    if (s != Scalar(0)) acc += (x - y) * (x - y) / s;
  };
  while (a && b) {
    if (a.index() == b.index()) {
      term(a.value(), b.value());
      ++a;
      ++b;
    } else if (a.index() < b.index()) {
      term(a.value(), Scalar(0));
      ++a;
    } else {
      term(Scalar(0), b.value());
      ++b;
    }
  }
  for (; a; ++a) term(a.value(), Scalar(0));
  for (; b; ++b) term(Scalar(0), b.value());
  return Scalar(0.5) * acc;
}

template <typename Scalar>
Scalar mass(const Eigen::SparseVector<Scalar>& h) {
  Scalar acc(0);
  for (typename Eigen::SparseVector<Scalar>::InnerIterator it(h); it; ++it) acc += it.value();
  return acc;
}

/// Exact structural and value equality (explicit zeros are never stored).
inline bool same_histogram(const Histogram& a, const Histogram& b) {
  if (a.size() != b.size() || a.nonZeros() != b.nonZeros()) return false;
  Histogram::InnerIterator ia(a), ib(b);
  for (; ia && ib; ++ia, ++ib)
    if (ia.index() != ib.index() || ia.value() != ib.value()) return false;
  return true;
}

}  // namespace egosum
