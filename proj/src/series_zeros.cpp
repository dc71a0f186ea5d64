#include "kneadlab/series_zeros.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>

namespace kneadlab {

namespace {

std::vector<std::complex<double>> polynomial_roots(std::vector<std::complex<double>> c,
                                                   double strip_tol) {
  double m = 0;
  for (auto& v : c) m = std::max(m, std::abs(v));
  if (m == 0) return {};
  int deg = int(c.size()) - 1;
  while (deg > 0 && std::abs(c[deg]) <= strip_tol * m) --deg;
  if (deg == 0) return {};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -c[i] / c[deg];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  std::vector<std::complex<double>> roots(deg);
  for (int i = 0; i < deg; ++i) roots[i] = es.eigenvalues()(i);
  return roots;
}

}  // namespace

std::vector<RootEstimate> series_zeros(const std::vector<std::complex<double>>& coeffs,
                                       double radius, const SeriesZerosOptions& opt) {
  auto full = polynomial_roots(coeffs, opt.strip_tol);
  std::vector<std::complex<double>> reduced_coeffs(
      coeffs.begin(), coeffs.end() - std::min<size_t>(opt.stability_gap, coeffs.size() - 1));
  auto reduced = polynomial_roots(reduced_coeffs, opt.strip_tol);

  std::vector<std::complex<double>> stable;
  for (const auto& r : full) {
    if (std::abs(r) >= radius) continue;
    double best = 1e300;
    for (const auto& q : reduced) best = std::min(best, std::abs(r - q));
    if (best <= opt.accept_tol * std::max(1.0, std::abs(r))) stable.push_back(r);
  }
  std::sort(stable.begin(), stable.end(), [](const auto& a, const auto& b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
    return std::arg(a) < std::arg(b);
  });

  std::vector<RootEstimate> out;
  size_t i = 0;
  while (i < stable.size()) {
    std::complex<double> sum = stable[i];
    size_t j = i + 1;
    while (j < stable.size() &&
           std::abs(stable[j] - stable[i]) <=
               opt.cluster_tol * std::max(1.0, std::abs(stable[i]))) {
      sum += stable[j];
      ++j;
    }
    out.push_back({sum / double(j - i), int(j - i)});
    i = j;
  }
  return out;
}

std::vector<std::complex<double>> dense_eigenvalues(
    const std::vector<std::complex<double>>& rowmajor, int dim) {
  Eigen::MatrixXcd m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = rowmajor[i * dim + j];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  std::vector<std::complex<double>> ev(dim);
  for (int i = 0; i < dim; ++i) ev[i] = es.eigenvalues()(i);
  std::sort(ev.begin(), ev.end(), [](const auto& a, const auto& b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
    return std::arg(a) < std::arg(b);
  });
  return ev;
}

}  // namespace kneadlab
