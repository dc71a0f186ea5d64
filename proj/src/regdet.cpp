#include "kneadlab/regdet.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace kneadlab {

namespace {

Eigen::MatrixXcd to_eigen(const FiniteOperator& A) {
  Eigen::MatrixXcd m(A.dim, A.dim);
  for (int i = 0; i < A.dim; ++i)
    for (int j = 0; j < A.dim; ++j) m(i, j) = A.at(i, j);
  return m;
}

}  // namespace

DetFromTracesResult det_from_traces(const FiniteOperator& L, int K) {
  using CD = std::complex<double>;
  DetFromTracesResult res;

  SeriesMatrix<CD> m = SeriesMatrix<CD>::identity(L.dim, K);
  for (int i = 0; i < L.dim; ++i)
    for (int j = 0; j < L.dim; ++j) {
      auto e = m.at(i, j);
      if (K >= 1) e[1] -= L.at(i, j);
      m.set(i, j, std::move(e));
    }
  res.lhs = series_matrix_det(m);

  Eigen::MatrixXcd A = to_eigen(L);
  Eigen::MatrixXcd P = A;
  TruncatedSeries<CD> logz(K);
  for (int n = 1; n <= K; ++n) {
    logz[n] = -P.trace() / double(n);
    if (n < K) P = P * A;
  }
  res.rhs = series_exp(logz);
  res.residual = series_residual(res.lhs, res.rhs);
  return res;
}

std::vector<std::complex<double>> operator_eigenvalues(const FiniteOperator& A) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(to_eigen(A), false);
  std::vector<std::complex<double>> ev(A.dim);
  for (int i = 0; i < A.dim; ++i) ev[i] = es.eigenvalues()(i);
  return ev;
}

std::vector<double> singular_values(const FiniteOperator& A) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(A));
  std::vector<double> sv(A.dim);
  for (int i = 0; i < A.dim; ++i) sv[i] = svd.singularValues()(i);
  return sv;
}

FiniteOperator multiply(const FiniteOperator& A, const FiniteOperator& B) {
  FiniteOperator C = FiniteOperator::zero(A.dim);
  for (int i = 0; i < A.dim; ++i)
    for (int k = 0; k < A.dim; ++k)
      for (int j = 0; j < A.dim; ++j) C.at(i, j) += A.at(i, k) * B.at(k, j);
  return C;
}

Det2Result det2(const FiniteOperator& A) {
  Det2Result res;
  auto ev = operator_eigenvalues(A);
  std::complex<double> prod = 1.0;
  for (auto l : ev) prod *= (1.0 - l) * std::exp(l);
  res.via_eigenvalues = prod;

  Eigen::MatrixXcd m = to_eigen(A);
  Eigen::MatrixXcd expm = m.exp();
  Eigen::MatrixXcd direct = (Eigen::MatrixXcd::Identity(A.dim, A.dim) - m) * expm;
  res.via_direct = direct.determinant();
  res.residual = std::abs(res.via_eigenvalues - res.via_direct);
  return res;
}

std::complex<double> dense_det(std::vector<std::complex<double>> m, int n) {
  std::complex<double> det = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(m[r * n + col]) > std::abs(m[piv * n + col])) piv = r;
    if (std::abs(m[piv * n + col]) == 0.0) return 0.0;
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(m[piv * n + j], m[col * n + j]);
      det = -det;
    }
    det *= m[col * n + col];
    for (int r = col + 1; r < n; ++r) {
      auto f = m[r * n + col] / m[col * n + col];
      for (int j = col; j < n; ++j) m[r * n + j] -= f * m[col * n + j];
    }
  }
  return det;
}

}  // namespace kneadlab
