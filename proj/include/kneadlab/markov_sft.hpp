#pragma once

#include <complex>
#include <sstream>
#include <string>
#include <vector>

#include "kneadlab/series.hpp"
#include "kneadlab/series_matrix.hpp"
#include "kneadlab/series_zeros.hpp"
#include "kneadlab/zeta_sharp.hpp"

namespace kneadlab {

struct MarkovCertificate {
  bool is_markov = false;
  std::vector<std::vector<int>> image_covers;        // cells fully covered by f(I_j)
  std::vector<std::pair<int, int>> violations;       // (j, l): l partially covered
};

/// Checks the Markov property: every cell met by f(I_j) must be contained
/// in it.
template <class M>
MarkovCertificate markov_certificate(const PiecewiseAffineMap<M>& map,
                                     const PointCmp<M>& cmp = {}) {
  MarkovCertificate cert;
  int n = map.cells();
  cert.image_covers.resize(n);
  for (int j = 0; j < n; ++j) {
    auto lo = map.branch[j].eval(map.partition[j]);
    auto hi = map.branch[j].eval(map.partition[j + 1]);
    if (lo > hi) std::swap(lo, hi);
    for (int l = 0; l < n; ++l) {
      auto a = map.partition[l], b = map.partition[l + 1];
      bool covered = cmp.leq(lo, a) && cmp.leq(b, hi);
      bool disjoint = cmp.leq(b, lo) || cmp.leq(hi, a);
      if (covered)
        cert.image_covers[j].push_back(l);
      else if (!disjoint)
        cert.violations.emplace_back(j, l);
    }
  }
  cert.is_markov = cert.violations.empty();
  return cert;
}

template <class M>
struct WeightedTransitionMatrix {
  using C = typename M::cplx;
  int dim = 0;
  std::vector<int> A;   // 0/1, row-major
  std::vector<C> Ag;    // (A_g)_{jk} = A_{jk} g_j, row-major

  int a(int j, int k) const { return A[j * dim + k]; }
  const C& ag(int j, int k) const { return Ag[j * dim + k]; }
};

/// Builds A and A_g for a Markov map and verifies directly that the
/// transfer operator maps the locally-constant subspace by the rows of A_g.
template <class M>
WeightedTransitionMatrix<M> transition_matrices(const PiecewiseAffineMap<M>& map,
                                                const Weight<M>& w,
                                                const PointCmp<M>& cmp = {}) {
  using R = typename M::real;
  using C = typename M::cplx;
  auto cert = markov_certificate(map, cmp);
  if (!cert.is_markov)
    throw std::invalid_argument("transition_matrices: map is not Markov");
  int n = map.cells();
  WeightedTransitionMatrix<M> wtm;
  wtm.dim = n;
  wtm.A.assign(n * n, 0);
  wtm.Ag.assign(n * n, scalar_traits<C>::zero());
  for (int j = 0; j < n; ++j) {
    auto lo = map.branch[j].eval(map.partition[j]);
    auto hi = map.branch[j].eval(map.partition[j + 1]);
    if (lo > hi) std::swap(lo, hi);
    for (int k = 0; k < n; ++k) {
      auto a = std::max(lo, map.partition[k]);
      auto b = std::min(hi, map.partition[k + 1]);
      if (cmp.less(a, b)) {
        wtm.A[j * n + k] = 1;
        wtm.Ag[j * n + k] = w.on_branch(map, j);
      }
    }
  }

  // L maps the span of cell indicators into itself; check the action on
  // each indicator at cell midpoints against the rows of A_g.
  auto bs = inverse_branches(map, w, cmp);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      R mid = (map.partition[k] + map.partition[k + 1]) / R(2);
      C val = scalar_traits<C>::zero();
      for (int i = 0; i < n; ++i) {
        const auto& br = bs.branches[i];
        if (!(br.u < mid && mid < br.v)) continue;
        R y = br.psi.eval(mid);
        if (map.partition[j] < y && y < map.partition[j + 1]) val += br.weight;
      }
      if (abs_cd(val - wtm.ag(j, k)) > 1e-9)
        throw std::logic_error("transition_matrices: transfer action disagrees with A_g");
    }
  }
  return wtm;
}

template <class M>
struct SftSpectralData {
  using C = typename M::cplx;
  TruncatedSeries<C> det_poly;                  // det(Id - z A_g), degree <= N
  std::vector<std::complex<double>> eigenvalues;
  std::vector<C> traces;                        // Tr A_g^n for n = 1..K
};

/// Exact determinant polynomial det(Id - z A_g), dense eigenvalues, and
/// power traces.
template <class M>
SftSpectralData<M> sft_spectral_data(const WeightedTransitionMatrix<M>& wtm, int K) {
  using C = typename M::cplx;
  int n = wtm.dim;
  SftSpectralData<M> out;

  SeriesMatrix<C> m = SeriesMatrix<C>::identity(n, K);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      auto e = m.at(j, k);
      if (K >= 1) e[1] = e[1] - wtm.ag(j, k);
      m.set(j, k, e);
    }
  out.det_poly = series_matrix_det(m);

  std::vector<std::complex<double>> rowmajor(n * n);
  for (int i = 0; i < n * n; ++i) rowmajor[i] = to_cd(wtm.Ag[i]);
  out.eigenvalues = dense_eigenvalues(rowmajor, n);
  for (auto& ev : out.eigenvalues)
    if (std::abs(ev) < 1e-12) ev = 0.0;

  out.traces.assign(K + 1, scalar_traits<C>::zero());
  std::vector<C> power = wtm.Ag;
  for (int step = 1; step <= K; ++step) {
    C tr = scalar_traits<C>::zero();
    for (int i = 0; i < n; ++i) tr += power[i * n + i];
    out.traces[step] = tr;
    if (step == K) break;
    std::vector<C> next(n * n, scalar_traits<C>::zero());
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j) next[i * n + j] += power[i * n + l] * wtm.Ag[l * n + j];
    power = std::move(next);
  }
  return out;
}

enum class BadOrbitCase {
  boundary_increasing,   // a_0 or a_N fixed by an increasing return
  boundary_decreasing,
  increasing_interior,   // both sides periodic with the same period
  decreasing_interior,   // sides swap; period doubles on the cut-open space
  extremum_min,
  extremum_max,
};

inline const char* to_string(BadOrbitCase c) {
  switch (c) {
    case BadOrbitCase::boundary_increasing: return "boundary-increasing";
    case BadOrbitCase::boundary_decreasing: return "boundary-decreasing";
    case BadOrbitCase::increasing_interior: return "increasing-both-sided";
    case BadOrbitCase::decreasing_interior: return "decreasing-doubled-period";
    case BadOrbitCase::extremum_min: return "extremum-min";
    case BadOrbitCase::extremum_max: return "extremum-max";
  }
  return "?";
}

template <class M>
struct BadOrbit {
  using C = typename M::cplx;
  int partition_index = 0;
  int period = 0;
  C lambda{};            // weight product over one period (right-side itinerary)
  BadOrbitCase kind{};
  std::string factor;    // formal contribution bookkeeping, e.g. "(1 - z^p lambda)^{-1}"
};

/// Periodic orbits through partition points, classified like the cut-open
/// (doubled-endpoint) construction: at each visit the approach side selects
/// the branch, and the side propagates through monotone branches.
template <class M>
std::vector<BadOrbit<M>> bad_orbit_report(const PiecewiseAffineMap<M>& map, const Weight<M>& w,
                                          int n_max, const PointCmp<M>& cmp = {}) {
  using R = typename M::real;
  using C = typename M::cplx;
  std::vector<BadOrbit<M>> out;
  int N = map.cells();

  struct Return {
    bool periodic = false;
    int period = 0;
    int side = 0;           // side of the returning jet
    std::vector<int> cells; // branch sequence over one period
  };

  auto trace = [&](int i, int side) -> Return {
    Return ret;
    Jet<M> j(map.partition[i], R(side));
    for (int step = 1; step <= n_max; ++step) {
      int c = map.cell_of(j, cmp);
      if (c < 0) return ret;  // orbit leaves the partition cells
      ret.cells.push_back(c);
      j = map.branch[c].eval(j);
      if (cmp.equal(j.p, map.partition[i])) {
        ret.periodic = true;
        ret.period = step;
        ret.side = j.side();
        return ret;
      }
    }
    return ret;
  };

  for (int i = 0; i <= N; ++i) {
    bool has_right = i < N;
    bool has_left = i > 0;
    Return right = has_right ? trace(i, +1) : Return{};
    Return left = has_left ? trace(i, -1) : Return{};
    const Return& primary = right.periodic ? right : left;
    if (!primary.periodic) continue;

    BadOrbit<M> rec;
    rec.partition_index = i;
    rec.period = primary.period;
    C lambda = scalar_traits<C>::one();
    for (int c : primary.cells) lambda *= w.on_branch(map, c);
    rec.lambda = lambda;

    if (!has_left || !has_right) {
      // One-sided boundary point: increasing when the return keeps the side.
      int seed_side = has_right ? 1 : -1;
      rec.kind = primary.side == seed_side ? BadOrbitCase::boundary_increasing
                                           : BadOrbitCase::boundary_decreasing;
    } else {
      // Interior point: compare the two one-sided first steps.
      Jet<M> jr(map.partition[i], R(1)), jl(map.partition[i], R(-1));
      int cr = map.cell_of(jr, cmp), cl = map.cell_of(jl, cmp);
      Jet<M> ir = map.branch[cr].eval(jr);
      Jet<M> il = map.branch[cl].eval(jl);
      bool merged = cmp.equal(ir.p, il.p) && ir.side() == il.side();
      if (merged) {
        rec.kind = ir.side() < 0 ? BadOrbitCase::extremum_max : BadOrbitCase::extremum_min;
      } else if ((right.periodic && right.side > 0) ||
                 (!right.periodic && left.periodic && left.side < 0)) {
        rec.kind = BadOrbitCase::increasing_interior;
      } else {
        rec.kind = BadOrbitCase::decreasing_interior;
      }
    }

    std::ostringstream os;
    os << "(1 - z^" << rec.period << " * lambda)^{-1} per record, lambda=" << to_cd(rec.lambda);
    rec.factor = os.str();
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace kneadlab
