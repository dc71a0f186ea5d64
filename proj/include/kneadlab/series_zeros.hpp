#pragma once

#include <complex>
#include <vector>

#include "kneadlab/series.hpp"

namespace kneadlab {

struct RootEstimate {
  std::complex<double> location;
  int multiplicity = 1;
};

struct SeriesZerosOptions {
  int stability_gap = 2;
  /// A degree-K root is kept only if the degree-(K-gap) truncation has a
  /// root within accept_tol * max(1, |root|).
  double accept_tol = 1e-6;
  /// Roots closer than cluster_tol * max(1, |root|) merge into one root
  /// with multiplicity.
  double cluster_tol = 1e-5;
  /// Trailing coefficients below strip_tol * max|coeff| are treated as zero.
  double strip_tol = 1e-12;
};

/// Roots of the truncation polynomial inside |z| < radius, filtered for
/// stability under lowering the truncation order.  Returns (location,
/// multiplicity) pairs sorted by |location|.  "No stable roots" is an empty
/// result, not an error.
std::vector<RootEstimate> series_zeros(const std::vector<std::complex<double>>& coeffs,
                                       double radius, const SeriesZerosOptions& opt = {});

template <class C>
std::vector<RootEstimate> series_zeros(const TruncatedSeries<C>& s, double radius,
                                       const SeriesZerosOptions& opt = {}) {
  if (abs_cd(s[0]) == 0.0)
    throw std::invalid_argument("series_zeros: constant term must be nonzero");
  if (s.order() < opt.stability_gap + 4)
    throw std::invalid_argument("series_zeros: order must be >= stability_gap + 4");
  std::vector<std::complex<double>> c(s.order() + 1);
  for (int n = 0; n <= s.order(); ++n) c[n] = to_cd(s[n]);
  return series_zeros(c, radius, opt);
}

/// Eigenvalues of a dense complex matrix given as row-major coefficients.
std::vector<std::complex<double>> dense_eigenvalues(
    const std::vector<std::complex<double>>& rowmajor, int dim);

}  // namespace kneadlab
