#pragma once

#include <stdexcept>
#include <vector>

#include "kneadlab/series.hpp"

namespace kneadlab {

/// Square matrix with truncated-series entries sharing one order.
template <class C>
class SeriesMatrix {
 public:
  SeriesMatrix(int dim, int order)
      : dim_(dim), order_(order), e_(dim * dim, TruncatedSeries<C>(order)) {
    if (dim <= 0) throw std::invalid_argument("SeriesMatrix: dim must be positive");
  }

  static SeriesMatrix identity(int dim, int order) {
    SeriesMatrix m(dim, order);
    for (int i = 0; i < dim; ++i) m.at(i, i) = TruncatedSeries<C>::one(order);
    return m;
  }

  int dim() const { return dim_; }
  int order() const { return order_; }

  TruncatedSeries<C>& at(int i, int j) { return e_[i * dim_ + j]; }
  const TruncatedSeries<C>& at(int i, int j) const { return e_[i * dim_ + j]; }

  void set(int i, int j, TruncatedSeries<C> s) {
    if (s.order() != order_)
      throw std::invalid_argument("SeriesMatrix: entry order mismatch");
    e_[i * dim_ + j] = std::move(s);
  }

  friend SeriesMatrix operator+(const SeriesMatrix& a, const SeriesMatrix& b) {
    if (a.dim_ != b.dim_ || a.order_ != b.order_)
      throw std::invalid_argument("SeriesMatrix: shape/order mismatch");
    SeriesMatrix r(a.dim_, a.order_);
    for (size_t i = 0; i < a.e_.size(); ++i) r.e_[i] = a.e_[i] + b.e_[i];
    return r;
  }

 private:
  int dim_;
  int order_;
  std::vector<TruncatedSeries<C>> e_;
};

/// Determinant over the truncated-series ring.  Laplace expansion with
/// column-subset memoization: O(2^n * n) series multiplications, exact
/// truncation, no divisions.  Intended for the desk-scale dims (<= 10)
/// this library produces.
template <class C>
TruncatedSeries<C> series_matrix_det(const SeriesMatrix<C>& m) {
  int n = m.dim();
  if (n > 12) throw std::invalid_argument("series_matrix_det: dim too large");
  int k = m.order();
  size_t nmask = size_t(1) << n;
  // minor[mask] = det of the submatrix on the first popcount(mask) rows and
  // the column set `mask`.
  std::vector<TruncatedSeries<C>> minor(nmask, TruncatedSeries<C>(k));
  minor[0] = TruncatedSeries<C>::one(k);
  for (size_t mask = 1; mask < nmask; ++mask) {
    int row = __builtin_popcountll(mask) - 1;
    TruncatedSeries<C> acc(k);
    int colpos = 0;
    for (int j = 0; j < n; ++j) {
      if (!(mask & (size_t(1) << j))) continue;
      const TruncatedSeries<C>& term = m.at(row, j) * minor[mask & ~(size_t(1) << j)];
      if ((row + colpos) % 2 == 0)
        acc = acc + term;
      else
        acc = acc - term;
      ++colpos;
    }
    minor[mask] = acc;
  }
  return minor[nmask - 1];
}

}  // namespace kneadlab
