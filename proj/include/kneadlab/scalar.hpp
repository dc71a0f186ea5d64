#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace kneadlab {

using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.template convert_to<double>(); }
inline double to_double(double r) { return r; }

inline int sign_of(const Rational& r) { return r.sign(); }
inline int sign_of(double r) { return (r > 0) - (r < 0); }

/// Complex numbers with exact rational components.  Used by the exact
/// arithmetic mode; mirrors the subset of std::complex<double> the library
/// needs.
struct ComplexRational {
  Rational re, im;

  ComplexRational() : re(0), im(0) {}
  ComplexRational(int v) : re(v), im(0) {}
  ComplexRational(long v) : re(v), im(0) {}
  ComplexRational(Rational r) : re(std::move(r)), im(0) {}
  ComplexRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  ComplexRational& operator+=(const ComplexRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  ComplexRational& operator-=(const ComplexRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  ComplexRational& operator*=(const ComplexRational& o) {
    Rational r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  ComplexRational& operator/=(const ComplexRational& o) {
    Rational n = o.re * o.re + o.im * o.im;
    if (n == 0) throw std::domain_error("ComplexRational: division by zero");
    Rational r = (re * o.re + im * o.im) / n;
    im = (im * o.re - re * o.im) / n;
    re = std::move(r);
    return *this;
  }

  friend ComplexRational operator+(ComplexRational a, const ComplexRational& b) { return a += b; }
  friend ComplexRational operator-(ComplexRational a, const ComplexRational& b) { return a -= b; }
  friend ComplexRational operator*(ComplexRational a, const ComplexRational& b) { return a *= b; }
  friend ComplexRational operator/(ComplexRational a, const ComplexRational& b) { return a /= b; }
  friend ComplexRational operator-(const ComplexRational& a) { return {-a.re, -a.im}; }
  friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const ComplexRational& a, const ComplexRational& b) { return !(a == b); }
};

inline std::complex<double> to_cd(const ComplexRational& c) {
  return {to_double(c.re), to_double(c.im)};
}
inline std::complex<double> to_cd(const std::complex<double>& c) { return c; }

inline double abs_cd(const ComplexRational& c) { return std::abs(to_cd(c)); }
inline double abs_cd(const std::complex<double>& c) { return std::abs(c); }

/// |re| + |im|: an exact dominating substitute for the modulus, used where
/// a positive mass of the scalar's own real type is needed.
inline double l1_mass(const std::complex<double>& c) {
  return std::abs(c.real()) + std::abs(c.imag());
}
inline Rational l1_mass(const ComplexRational& c) {
  Rational r = c.re < 0 ? Rational(-c.re) : c.re;
  Rational i = c.im < 0 ? Rational(-c.im) : c.im;
  return r + i;
}

/// Traits shared by the two coefficient fields.
template <class C>
struct scalar_traits;

template <>
struct scalar_traits<std::complex<double>> {
  using real_type = double;
  static constexpr bool exact = false;
  static std::complex<double> zero() { return {0.0, 0.0}; }
  static std::complex<double> one() { return {1.0, 0.0}; }
  static std::complex<double> from_int(long v) { return {double(v), 0.0}; }
  static std::complex<double> from_ratio(long p, long q) { return {double(p) / double(q), 0.0}; }
  static std::complex<double> from_real(double r) { return {r, 0.0}; }
};

template <>
struct scalar_traits<ComplexRational> {
  using real_type = Rational;
  static constexpr bool exact = true;
  static ComplexRational zero() { return {}; }
  static ComplexRational one() { return ComplexRational(Rational(1)); }
  static ComplexRational from_int(long v) { return ComplexRational(Rational(v)); }
  static ComplexRational from_ratio(long p, long q) {
    return ComplexRational(Rational(p) / Rational(q));
  }
  static ComplexRational from_real(Rational r) { return ComplexRational(std::move(r)); }
};

/// Arithmetic mode: float (complex<double> coefficients, tolerance-based
/// geometry) or rational (exact coefficients, exact geometry).
struct FloatMode {
  using real = double;
  using cplx = std::complex<double>;
  static constexpr bool exact = false;
};

struct RationalMode {
  using real = Rational;
  using cplx = ComplexRational;
  static constexpr bool exact = true;
};

/// Point comparisons with an explicit endpoint tolerance.  In the exact mode
/// the tolerance is ignored and comparisons are exact.
template <class M>
struct PointCmp {
  double eta = 1e-12;

  using R = typename M::real;

  bool equal(const R& a, const R& b) const {
    if constexpr (M::exact)
      return a == b;
    else
      return std::abs(a - b) <= eta;
  }
  bool less(const R& a, const R& b) const { return !equal(a, b) && a < b; }
  bool leq(const R& a, const R& b) const { return equal(a, b) || a < b; }
  bool in_open(const R& x, const R& u, const R& v) const { return less(u, x) && less(x, v); }
  bool in_closed(const R& x, const R& u, const R& v) const { return leq(u, x) && leq(x, v); }
};

/// One-sided point: the value p approached from the side sign(d) with an
/// infinitesimal offset of magnitude |d|.  Affine maps act componentwise.
/// Lexicographic order makes one-sided interval membership exact.
template <class M>
struct Jet {
  using R = typename M::real;
  R p;
  R d;

  Jet() : p(0), d(0) {}
  Jet(R point, R dir) : p(std::move(point)), d(std::move(dir)) {}

  int side() const { return sign_of(d); }
};

template <class M>
Jet<M> apply_affine(const typename M::real& slope, const typename M::real& intercept,
                    const Jet<M>& j) {
  return Jet<M>(slope * j.p + intercept, slope * j.d);
}

/// sign(jet - y) with the side breaking exact ties; never 0 for seeds with
/// a nonzero infinitesimal part.
template <class M>
int jet_sign_minus(const Jet<M>& j, const typename M::real& y, const PointCmp<M>& cmp) {
  if (cmp.equal(j.p, y)) return j.side();
  return j.p < y ? -1 : 1;
}

/// Membership of a one-sided point in the open interval (u, v); the side
/// decides at the endpoints.
template <class M>
bool jet_in_interval(const Jet<M>& j, const typename M::real& u, const typename M::real& v,
                     const PointCmp<M>& cmp) {
  if (cmp.equal(j.p, u)) return j.side() > 0;
  if (cmp.equal(j.p, v)) return j.side() < 0;
  return u < j.p && j.p < v;
}

}  // namespace kneadlab
