#pragma once

#include <complex>
#include <vector>

#include "kneadlab/kneading.hpp"
#include "kneadlab/series.hpp"
#include "kneadlab/series_matrix.hpp"

namespace kneadlab {

/// Dense complex matrix at desk scale, with optional atomic-kernel
/// provenance.
struct FiniteOperator {
  int dim = 0;
  std::vector<std::complex<double>> entries;  // row-major

  std::complex<double>& at(int i, int j) { return entries[i * dim + j]; }
  const std::complex<double>& at(int i, int j) const { return entries[i * dim + j]; }

  static FiniteOperator zero(int dim) {
    return {dim, std::vector<std::complex<double>>(dim * dim, {0.0, 0.0})};
  }
};

struct DetFromTracesResult {
  TruncatedSeries<std::complex<double>> lhs;  // det(Id - zL), exact polynomial route
  TruncatedSeries<std::complex<double>> rhs;  // exp(-sum z^n/n Tr L^n)
  double residual = 0;
};

/// det(Id - zL) computed from the characteristic polynomial and from the
/// trace exponential; the two routes are each other's oracle.
DetFromTracesResult det_from_traces(const FiniteOperator& L, int K);

struct Det2Result {
  std::complex<double> via_eigenvalues;  // prod (1 - l_j) exp(l_j)
  std::complex<double> via_direct;       // det((Id - A) exp(A))
  double residual = 0;
};

/// Regularized determinant Det_2(Id - A), two routes.
Det2Result det2(const FiniteOperator& A);

std::vector<std::complex<double>> operator_eigenvalues(const FiniteOperator& A);
std::vector<double> singular_values(const FiniteOperator& A);

inline double hs_norm(const FiniteOperator& A) {
  double s = 0;
  for (const auto& v : A.entries) s += std::norm(v);
  return std::sqrt(s);
}

inline double trace_norm(const FiniteOperator& A) {
  double s = 0;
  for (double sv : singular_values(A)) s += sv;
  return s;
}

FiniteOperator multiply(const FiniteOperator& A, const FiniteOperator& B);

/// Scalar determinant by Gaussian elimination; n is small.
std::complex<double> dense_det(std::vector<std::complex<double>> m, int n);

template <class C>
std::complex<double> series_eval(const TruncatedSeries<C>& s, std::complex<double> z) {
  std::complex<double> acc = 0;
  for (int n = s.order(); n >= 0; --n) acc = acc * z + to_cd(s[n]);
  return acc;
}

template <class M>
struct PlemeljReport {
  using C = typename M::cplx;
  std::vector<TruncatedSeries<C>> phis;  // Phi_1 .. Phi_{n_max}
  TruncatedSeries<C> assembled;          // 1 + sum Phi_n / n!
  bool hadamard_ok = true;
  double hadamard_worst = 0;  // max |det| / (C0^n n^{n/2}) over sampled terms
};

/// Fredholm coefficients Phi_n = int det_{nxn}(K(x_i, x_j)) dmu^n over the
/// atomic measure: a sum over ordered atom tuples with repetition (repeated
/// atoms contribute vanishing minors).  Each sampled minor is checked
/// against the Hadamard bound |det| <= C0^n n^{n/2} at the given z samples.
template <class M>
PlemeljReport<M> plemelj_smithies(const KernelSeriesMatrix<M>& km, int n_max, int K,
                                  const std::vector<std::complex<double>>& z_samples = {0.25,
                                                                                        0.5}) {
  using C = typename M::cplx;
  int na = km.mu.size();
  PlemeljReport<M> rep;
  rep.assembled = TruncatedSeries<C>::one(K);

  long factorial = 1;
  for (int n = 1; n <= n_max; ++n) {
    factorial *= n;
    TruncatedSeries<C> phi(K);
    std::vector<int> tuple(n, 0);
    bool done = false;
    while (!done) {
      SeriesMatrix<C> minor(n, K);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) minor.set(a, b, km.entries.at(tuple[a], tuple[b]).truncated(K));
      auto d = series_matrix_det(minor);

      for (auto z : z_samples) {
        double c0 = 0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            c0 = std::max(c0, std::abs(series_eval(km.entries.at(tuple[a], tuple[b]), z)));
        std::vector<std::complex<double>> scalar(n * n);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            scalar[a * n + b] = series_eval(km.entries.at(tuple[a], tuple[b]), z);
        double lhs = std::abs(dense_det(std::move(scalar), n));
        double bound = std::pow(c0, n) * std::pow(double(n), n / 2.0);
        if (bound > 0) {
          double ratio = lhs / bound;
          rep.hadamard_worst = std::max(rep.hadamard_worst, ratio);
          if (ratio > 1.0 + 1e-9) rep.hadamard_ok = false;
        } else if (lhs > 1e-12) {
          rep.hadamard_ok = false;
        }
      }

      C mass_prod = scalar_traits<C>::one();
      for (int a = 0; a < n; ++a)
        mass_prod *= scalar_traits<C>::from_real(km.mu.masses[tuple[a]]);
      phi = phi + d * mass_prod;

      // next tuple
      int pos = n - 1;
      while (pos >= 0 && tuple[pos] == na - 1) tuple[pos--] = 0;
      if (pos < 0)
        done = true;
      else
        ++tuple[pos];
    }
    rep.phis.push_back(phi);
    rep.assembled = rep.assembled + phi * (scalar_traits<C>::one() /
                                           scalar_traits<C>::from_int(factorial));
  }
  return rep;
}

}  // namespace kneadlab
