#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "kneadlab/scalar.hpp"

namespace kneadlab {

/// Power series in z truncated at a fixed order K: coefficients c_0..c_K.
/// All binary operations truncate at the smaller operand order.
template <class C>
class TruncatedSeries {
 public:
  TruncatedSeries() : c_(1, scalar_traits<C>::zero()) {}
  explicit TruncatedSeries(int order) : c_(order + 1, scalar_traits<C>::zero()) {
    if (order < 0) throw std::invalid_argument("series order must be >= 0");
  }
  TruncatedSeries(int order, std::vector<C> coeffs) : c_(std::move(coeffs)) {
    if (int(c_.size()) != order + 1)
      throw std::invalid_argument("series: coefficient count does not match order");
  }

  static TruncatedSeries constant(const C& v, int order) {
    TruncatedSeries s(order);
    s.c_[0] = v;
    return s;
  }
  static TruncatedSeries one(int order) {
    return constant(scalar_traits<C>::one(), order);
  }
  static TruncatedSeries z(int order) {
    TruncatedSeries s(order);
    if (order >= 1) s.c_[1] = scalar_traits<C>::one();
    return s;
  }

  int order() const { return int(c_.size()) - 1; }
  const C& operator[](int n) const { return c_[n]; }
  C& operator[](int n) { return c_[n]; }
  const std::vector<C>& coeffs() const { return c_; }

  TruncatedSeries truncated(int new_order) const {
    if (new_order >= order()) return *this;
    std::vector<C> c(c_.begin(), c_.begin() + new_order + 1);
    return TruncatedSeries(new_order, std::move(c));
  }

  friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
    int k = std::min(a.order(), b.order());
    TruncatedSeries r(k);
    for (int n = 0; n <= k; ++n) r.c_[n] = a.c_[n] + b.c_[n];
    return r;
  }
  friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
    int k = std::min(a.order(), b.order());
    TruncatedSeries r(k);
    for (int n = 0; n <= k; ++n) r.c_[n] = a.c_[n] - b.c_[n];
    return r;
  }
  friend TruncatedSeries operator-(const TruncatedSeries& a) {
    TruncatedSeries r(a.order());
    for (int n = 0; n <= a.order(); ++n) r.c_[n] = -a.c_[n];
    return r;
  }
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    int k = std::min(a.order(), b.order());
    TruncatedSeries r(k);
    for (int n = 0; n <= k; ++n) {
      C acc = scalar_traits<C>::zero();
      for (int i = 0; i <= n; ++i) acc += a.c_[i] * b.c_[n - i];
      r.c_[n] = acc;
    }
    return r;
  }
  friend TruncatedSeries operator*(const C& s, const TruncatedSeries& a) {
    TruncatedSeries r(a.order());
    for (int n = 0; n <= a.order(); ++n) r.c_[n] = s * a.c_[n];
    return r;
  }
  friend TruncatedSeries operator*(const TruncatedSeries& a, const C& s) { return s * a; }

  double max_abs_coeff() const {
    double m = 0;
    for (const C& v : c_) m = std::max(m, abs_cd(v));
    return m;
  }

 private:
  std::vector<C> c_;
};

/// max_n |a_n - b_n| over the shared order, as a double.
template <class C>
double series_residual(const TruncatedSeries<C>& a, const TruncatedSeries<C>& b) {
  int k = std::min(a.order(), b.order());
  double m = 0;
  for (int n = 0; n <= k; ++n) m = std::max(m, abs_cd(a[n] - b[n]));
  return m;
}

/// exp(a) for a series with vanishing constant term, via the derivative
/// identity (exp a)' = a' exp a, so truncation is exact.
template <class C>
TruncatedSeries<C> series_exp(const TruncatedSeries<C>& a) {
  if (!(a[0] == scalar_traits<C>::zero()))
    throw std::invalid_argument("series_exp: constant term must vanish");
  int k = a.order();
  TruncatedSeries<C> b(k);
  b[0] = scalar_traits<C>::one();
  for (int n = 1; n <= k; ++n) {
    C acc = scalar_traits<C>::zero();
    for (int j = 1; j <= n; ++j) acc += scalar_traits<C>::from_int(j) * a[j] * b[n - j];
    b[n] = acc / scalar_traits<C>::from_int(n);
  }
  return b;
}

/// log(a) for a series with constant term 1; inverse of series_exp.
template <class C>
TruncatedSeries<C> series_log(const TruncatedSeries<C>& a) {
  if (!(a[0] == scalar_traits<C>::one()))
    throw std::invalid_argument("series_log: constant term must be 1");
  int k = a.order();
  TruncatedSeries<C> l(k);
  for (int n = 1; n <= k; ++n) {
    C acc = scalar_traits<C>::from_int(n) * a[n];
    for (int j = 1; j < n; ++j) acc -= scalar_traits<C>::from_int(j) * l[j] * a[n - j];
    l[n] = acc / scalar_traits<C>::from_int(n);
  }
  return l;
}

/// Multiplicative inverse; requires a nonvanishing constant term.
template <class C>
TruncatedSeries<C> series_inverse(const TruncatedSeries<C>& a) {
  if (a[0] == scalar_traits<C>::zero())
    throw std::invalid_argument("series_inverse: constant term must be nonzero");
  int k = a.order();
  TruncatedSeries<C> b(k);
  b[0] = scalar_traits<C>::one() / a[0];
  for (int n = 1; n <= k; ++n) {
    C acc = scalar_traits<C>::zero();
    for (int j = 1; j <= n; ++j) acc += a[j] * b[n - j];
    b[n] = -(acc / a[0]);
  }
  return b;
}

/// a^(p/q) for a series with constant term 1, via exp((p/q) log a).
/// Exact in rational mode (generalized binomial coefficients are rational).
template <class C>
TruncatedSeries<C> series_pow_ratio(const TruncatedSeries<C>& a, long p, long q) {
  C alpha = scalar_traits<C>::from_ratio(p, q);
  return series_exp(alpha * series_log(a));
}

/// Geometric-style closed form (1 - c z)^(p/q) truncated at order k.
template <class C>
TruncatedSeries<C> one_minus_cz_pow(const C& c, long p, long q, int k) {
  TruncatedSeries<C> base = TruncatedSeries<C>::one(k);
  if (k >= 1) base[1] = -c;
  return series_pow_ratio(base, p, q);
}

}  // namespace kneadlab
