#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "kneadlab/map_model.hpp"
#include "kneadlab/series.hpp"
#include "kneadlab/series_matrix.hpp"
#include "kneadlab/series_zeros.hpp"
#include "kneadlab/zeta_sharp.hpp"

namespace kneadlab {

// ---------------------------------------------------------------------------
// Milnor-Thurston kneading matrix
// ---------------------------------------------------------------------------

template <class M>
struct KneadingMatrixMT {
  SeriesMatrix<typename M::cplx> matrix;  // (N-1) x (N-1)
  int eps_a0 = 0;                         // branch sign just right of a_0
  int eps_aN = 0;                         // branch sign just left of a_N
};

/// Kneading matrix of a continuous piecewise affine map: row i is
/// (theta(a_i+) - theta(a_i-))/2 where theta(x)(z) tracks the one-sided
/// orbit of x.  The alpha-tuple uses the interior breakpoints a_1..a_{N-1},
/// so the matrix is square and equals the identity at z = 0.
template <class M>
KneadingMatrixMT<M> kneading_matrix(const PiecewiseAffineMap<M>& map, int K,
                                    const PointCmp<M>& cmp = {}) {
  using R = typename M::real;
  using C = typename M::cplx;
  if (!map.continuous(cmp))
    throw std::invalid_argument("kneading_matrix: map must be continuous");
  int N = map.cells();
  if (N < 2) throw std::invalid_argument("kneading_matrix: need at least two laps");

  auto half = scalar_traits<C>::from_ratio(1, 2);

  // theta(x, side): N-1 series; the orbit is propagated as a one-sided point.
  auto theta = [&](const R& x, int side) {
    std::vector<TruncatedSeries<C>> comp(N - 1, TruncatedSeries<C>(K));
    Jet<M> j(x, R(side));
    int eps_prod = 1;
    for (int k = 0; k <= K; ++k) {
      for (int t = 1; t < N; ++t) {
        int s = jet_sign_minus(j, map.partition[t], cmp);
        comp[t - 1][k] = scalar_traits<C>::from_int(eps_prod * s);
      }
      if (k == K) break;
      int c = map.cell_of(j, cmp);
      if (c < 0)
        throw std::domain_error("kneading_matrix: one-sided orbit left the partition");
      eps_prod *= map.branch_sign(c);
      j = map.branch[c].eval(j);
    }
    return comp;
  };

  KneadingMatrixMT<M> km{SeriesMatrix<C>(N - 1, K), map.branch_sign(0), map.branch_sign(N - 1)};
  for (int i = 1; i < N; ++i) {
    auto plus = theta(map.partition[i], +1);
    auto minus = theta(map.partition[i], -1);
    for (int t = 0; t < N - 1; ++t) km.matrix.set(i - 1, t, half * (plus[t] - minus[t]));
  }
  return km;
}

// ---------------------------------------------------------------------------
// Unweighted Milnor-Thurston identity, candidate readings
// ---------------------------------------------------------------------------

template <class M>
struct MtCandidate {
  std::string name;
  TruncatedSeries<typename M::cplx> series;
  double residual = 0;
};

template <class M>
struct MtIdentityReport {
  TruncatedSeries<typename M::cplx> lhs;  // zeta^- from orbit enumeration
  std::vector<MtCandidate<M>> candidates;
  int best = -1;
  double best_residual = 0;
};

/// Evaluates the candidate normalizations of the kneading-determinant
/// formula for zeta^- and reports the coefficientwise residual of each
/// against the enumeration oracle.
template <class M>
MtIdentityReport<M> mt_identity_report(const PiecewiseAffineMap<M>& map, int K,
                                       const PointCmp<M>& cmp = {}) {
  using C = typename M::cplx;
  MtIdentityReport<M> rep;
  rep.lhs = negative_zeta_series(map, K, cmp);
  auto km = kneading_matrix(map, K, cmp);
  auto detD = series_matrix_det(km.matrix);

  int N = map.cells();
  auto id_plus = SeriesMatrix<C>::identity(N - 1, K) + km.matrix;
  auto det_id_plus = series_matrix_det(id_plus);

  auto one = TruncatedSeries<C>::one(K);
  auto zz = TruncatedSeries<C>::z(K);
  C e0 = scalar_traits<C>::from_int(km.eps_a0);
  C eN = scalar_traits<C>::from_int(km.eps_aN);
  C two = scalar_traits<C>::from_int(2);

  auto num_half_sum = one - zz * ((e0 + eN) / two);        // 1 - z (e0+eN)/2
  auto num_literal = one - zz * e0 - zz * (eN / two);      // 1 - z e0 - z eN/2
  auto num_one = one;

  struct Den {
    std::string name;
    TruncatedSeries<C> series;
  };
  std::vector<Den> dens = {
      {"det(D)", detD},
      {"(1-z)det(D)", (one - zz) * detD},
      {"det(Id+D)", det_id_plus},
  };
  struct Num {
    std::string name;
    TruncatedSeries<C> series;
  };
  std::vector<Num> nums = {
      {"1-z(e0+eN)/2", num_half_sum},
      {"1-z*e0-z*eN/2", num_literal},
      {"1", num_one},
  };

  rep.best_residual = 1e300;
  for (const auto& nm : nums)
    for (const auto& dn : dens) {
      MtCandidate<M> cand;
      cand.name = nm.name + " / " + dn.name;
      cand.series = nm.series * series_inverse(dn.series);
      cand.residual = series_residual(cand.series, rep.lhs);
      if (cand.residual < rep.best_residual) {
        rep.best_residual = cand.residual;
        rep.best = int(rep.candidates.size());
      }
      rep.candidates.push_back(std::move(cand));
    }
  return rep;
}

// ---------------------------------------------------------------------------
// Atomic measure and weighted kneading kernels
// ---------------------------------------------------------------------------

template <class M>
struct AtomicMeasure {
  using R = typename M::real;
  std::vector<R> locations;  // sorted, deduplicated
  std::vector<R> masses;     // strictly positive
  std::vector<std::string> provenance;

  int size() const { return int(locations.size()); }
  int find(const R& x, const PointCmp<M>& cmp) const {
    for (int i = 0; i < size(); ++i)
      if (cmp.equal(locations[i], x)) return i;
    return -1;
  }
};

/// The finite dominating measure carried by the weight jumps: each branch
/// contributes mass at its domain endpoints and at their images.  Masses
/// use |re| + |im|, an equivalent dominating choice that stays exact in
/// rational mode; the kernel determinants do not depend on the masses.
template <class M>
AtomicMeasure<M> atomic_measure(const BranchSystem<M>& bs, const PointCmp<M>& cmp = {}) {
  using R = typename M::real;
  AtomicMeasure<M> mu;
  auto add = [&](const R& x, R mass, const std::string& why) {
    if (mass == R(0)) return;
    int i = mu.find(x, cmp);
    if (i < 0) {
      mu.locations.push_back(x);
      mu.masses.push_back(mass);
      mu.provenance.push_back(why);
    } else {
      mu.masses[i] += mass;
      mu.provenance[i] += "," + why;
    }
  };
  for (int w = 0; w < bs.size(); ++w) {
    const auto& b = bs.branches[w];
    R mass = l1_mass(b.weight);
    add(b.u, mass, "dg" + std::to_string(w));
    add(b.v, mass, "dg" + std::to_string(w));
    add(b.image_lo(), mass, "dg^" + std::to_string(w));
    add(b.image_hi(), mass, "dg^" + std::to_string(w));
  }
  // sort by location
  std::vector<int> idx(mu.size());
  for (int i = 0; i < mu.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](int a, int b) { return mu.locations[a] < mu.locations[b]; });
  AtomicMeasure<M> out;
  for (int i : idx) {
    out.locations.push_back(mu.locations[i]);
    out.masses.push_back(mu.masses[i]);
    out.provenance.push_back(mu.provenance[i]);
  }
  return out;
}

enum class KernelSide { plain, dual };

template <class M>
struct KernelSeriesMatrix {
  AtomicMeasure<M> mu;
  SeriesMatrix<typename M::cplx> entries;  // K^z(x_i, x_j)
  KernelSide side;
  /// Hilbert-Schmidt norm sum |K_ij|^2 m_i m_j per z-coefficient, reported
  /// as a finiteness certificate.
  std::vector<double> hs_per_coeff;
};

/// Kernel of the kneading operator z N (Id - z M)^{-1} S realized on the
/// atoms of mu.  All evaluations are one-sided: branch weights are full on
/// the side inside the domain and zero outside, sgn breaks exact ties with
/// the side, and each weight-jump atom is approached from inside the branch
/// domain for contracting branches and from outside for expanding ones
/// (the orientation under which the identities close at the atomic level).
template <class M>
KernelSeriesMatrix<M> kneading_kernel(const BranchSystem<M>& input, const AtomicMeasure<M>& mu,
                                      int K, KernelSide side, const PointCmp<M>& cmp = {}) {
  using R = typename M::real;
  using C = typename M::cplx;
  if (K < 1) throw std::invalid_argument("kneading_kernel: K must be >= 1");
  BranchSystem<M> sys = side == KernelSide::dual ? dualize(input) : input;
  int natoms = mu.size();
  KernelSeriesMatrix<M> km{mu, SeriesMatrix<C>(natoms, K), side, {}};

  auto half = scalar_traits<C>::from_ratio(1, 2);

  // Memoized one-sided evaluation of M^m applied to the sgn kernels, as a
  // vector over the target atoms.
  struct Key {
    R p;
    int side;
    bool operator<(const Key& o) const {
      if (p != o.p) return p < o.p;
      return side < o.side;
    }
  };
  std::vector<std::map<Key, std::vector<C>>> memo(K);

  auto eval = [&](auto&& self, int m, const Jet<M>& j) -> const std::vector<C>& {
    Key key{j.p, j.side()};
    auto& tbl = memo[m];
    auto it = tbl.find(key);
    if (it != tbl.end()) return it->second;
    std::vector<C> v(natoms, scalar_traits<C>::zero());
    if (m == 0) {
      for (int t = 0; t < natoms; ++t)
        v[t] = scalar_traits<C>::from_int(jet_sign_minus(j, mu.locations[t], cmp)) * half;
    } else {
      for (const auto& br : sys.branches) {
        if (!jet_in_interval(j, br.u, br.v, cmp)) continue;
        const auto& sub = self(self, m - 1, br.psi.eval(j));
        for (int t = 0; t < natoms; ++t) v[t] += br.weight * sub[t];
      }
    }
    return tbl.emplace(key, std::move(v)).first->second;
  };

  std::vector<std::vector<TruncatedSeries<C>>> acc(
      natoms, std::vector<TruncatedSeries<C>>(natoms, TruncatedSeries<C>(K)));

  for (int w = 0; w < sys.size(); ++w) {
    const auto& br = sys.branches[w];
    bool contracting = std::abs(to_double(br.psi.slope)) < 1.0;
    // (endpoint, jump sign, seed side)
    struct Seed {
      R x;
      int jump;
      int side;
    };
    Seed seeds[2] = {
        {br.u, +1, contracting ? +1 : -1},
        {br.v, -1, contracting ? -1 : +1},
    };
    for (const auto& sd : seeds) {
      int i = mu.find(sd.x, cmp);
      if (i < 0)
        throw std::logic_error("kneading_kernel: weight jump at a point outside the measure");
      C coeff = (sd.jump > 0 ? br.weight : -br.weight) /
                scalar_traits<C>::from_real(mu.masses[i]);
      Jet<M> query = br.psi.eval(Jet<M>(sd.x, R(sd.side)));
      for (int m = 0; m < K; ++m) {
        const auto& v = eval(eval, m, query);
        for (int t = 0; t < natoms; ++t) acc[i][t][m + 1] += coeff * v[t];
      }
    }
  }
  for (int i = 0; i < natoms; ++i)
    for (int t = 0; t < natoms; ++t) km.entries.set(i, t, std::move(acc[i][t]));

  km.hs_per_coeff.assign(K + 1, 0.0);
  for (int k = 0; k <= K; ++k) {
    double s = 0;
    for (int i = 0; i < natoms; ++i)
      for (int t = 0; t < natoms; ++t) {
        double a = abs_cd(km.entries.at(i, t)[k]);
        s += a * a * to_double(mu.masses[i]) * to_double(mu.masses[t]);
      }
    km.hs_per_coeff[k] = s;
  }
  return km;
}

/// Det_*(Id + D): for an atomic measure the kernel operator is the finite
/// matrix M_D with entries K^z(x_i, x_j) mass_j, and the star determinant
/// exp(int K^z(x,x) dmu) Det_2(Id + D) collapses to det(Id + M_D).
template <class M>
TruncatedSeries<typename M::cplx> det_star_series(const KernelSeriesMatrix<M>& km, int K) {
  using C = typename M::cplx;
  int n = km.mu.size();
  SeriesMatrix<C> m = SeriesMatrix<C>::identity(n, K);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto e = m.at(i, j);
      e = e + km.entries.at(i, j) * scalar_traits<C>::from_real(km.mu.masses[j]);
      m.set(i, j, std::move(e));
    }
  return series_matrix_det(m).truncated(K);
}

/// The scaled kernel matrix M_D itself (entries times column masses).
template <class M>
SeriesMatrix<typename M::cplx> kernel_matrix_scaled(const KernelSeriesMatrix<M>& km) {
  using C = typename M::cplx;
  int n = km.mu.size();
  SeriesMatrix<C> m(n, km.entries.order());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m.set(i, j, km.entries.at(i, j) * scalar_traits<C>::from_real(km.mu.masses[j]));
  return m;
}

// ---------------------------------------------------------------------------
// Spectrum from the sharp determinant
// ---------------------------------------------------------------------------

struct EigenvalueEstimate {
  std::complex<double> eigenvalue;
  int multiplicity;
};

/// Zeros of Det#(1 - zM) inside |z| < radius, inverted into eigenvalue
/// estimates for M.  The radius must stay inside the disc where the sharp
/// determinant sees the spectrum, i.e. radius <= 1/hat_R.
template <class M>
std::vector<EigenvalueEstimate> spectrum_from_kneading(const BranchSystem<M>& bs, int K,
                                                       double radius,
                                                       const PointCmp<M>& cmp = {}) {
  if (bs.size() == 0) return {};
  {
    auto adj = branch_transitions(bs, cmp);
    size_t edges = 0;
    for (const auto& v : adj) edges += v.size();
    if (edges == 0) return {};  // no admissible words: Det# is identically 1
  }
  double rhat = hat_R(bs, HatRMethod::cycle_mean, 12, cmp);
  if (rhat > 0 && radius > 1.0 / rhat + 1e-9)
    throw std::invalid_argument("spectrum_from_kneading: radius exceeds 1/hat_R");
  auto rep = sharp_det_series(bs, K, cmp);
  auto roots = series_zeros(rep.det_sharp, radius);
  std::vector<EigenvalueEstimate> out;
  for (const auto& r : roots) out.push_back({1.0 / r.location, r.multiplicity});
  return out;
}

}  // namespace kneadlab
