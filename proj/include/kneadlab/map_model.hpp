#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "kneadlab/scalar.hpp"

namespace kneadlab {

template <class M>
struct AffineRule {
  using R = typename M::real;
  R slope;
  R intercept;

  R eval(const R& x) const { return slope * x + intercept; }
  Jet<M> eval(const Jet<M>& j) const { return apply_affine<M>(slope, intercept, j); }
  AffineRule inverse() const {
    return {R(1) / slope, -intercept / slope};
  }
};

/// Interval map given by a strictly increasing partition of [a_0, a_N] and
/// one affine rule per partition cell.  Cells are open; values at partition
/// points are resolved by one-sided limits.
template <class M>
struct PiecewiseAffineMap {
  using R = typename M::real;
  std::vector<R> partition;           // a_0 < a_1 < ... < a_N
  std::vector<AffineRule<M>> branch;  // branch[j] acts on (a_j, a_{j+1})

  int cells() const { return int(branch.size()); }
  const R& a0() const { return partition.front(); }
  const R& aN() const { return partition.back(); }

  void validate(const PointCmp<M>& cmp) const {
    if (partition.size() < 2) throw std::invalid_argument("map: partition needs >= 2 points");
    if (branch.size() + 1 != partition.size())
      throw std::invalid_argument("map: need one branch per partition cell");
    for (size_t i = 0; i + 1 < partition.size(); ++i)
      if (!(partition[i] < partition[i + 1]))
        throw std::invalid_argument("map: partition not increasing");
    for (const auto& b : branch)
      if (b.slope == R(0)) throw std::invalid_argument("map: zero branch slope");
    // The ambient interval is [0, 1]: the partition lives inside it and
    // branch values stay inside it (the partition need not be onto).
    if (!cmp.leq(R(0), a0()) || !cmp.leq(aN(), R(1)))
      throw std::invalid_argument("map: partition leaves the unit interval");
    for (int j = 0; j < cells(); ++j) {
      R lo = branch[j].eval(partition[j]);
      R hi = branch[j].eval(partition[j + 1]);
      if (lo > hi) std::swap(lo, hi);
      if (!cmp.leq(R(0), lo) || !cmp.leq(hi, R(1)))
        throw std::invalid_argument("map: branch " + std::to_string(j) +
                                    " leaves the unit interval");
    }
  }

  /// True when one-sided branch values agree at every interior partition
  /// point.
  bool continuous(const PointCmp<M>& cmp) const {
    for (size_t i = 1; i + 1 < partition.size(); ++i) {
      R left = branch[i - 1].eval(partition[i]);
      R right = branch[i].eval(partition[i]);
      if (!cmp.equal(left, right)) return false;
    }
    return true;
  }

  /// Cell index containing a one-sided point; the side decides at partition
  /// points.  Returns -1 when the point is outside every cell.
  int cell_of(const Jet<M>& j, const PointCmp<M>& cmp) const {
    for (int k = 0; k < cells(); ++k)
      if (jet_in_interval(j, partition[k], partition[k + 1], cmp)) return k;
    return -1;
  }

  int branch_sign(int j) const { return sign_of(branch[j].slope); }
};

enum class WeightMode { one_over_abs_derivative, locally_constant };

/// Per-branch weight constants.  In derivative mode the constant on cell j
/// is 1/|s_j|; evaluation at an interior discontinuity returns the average
/// of the one-sided values.
template <class M>
struct Weight {
  using R = typename M::real;
  using C = typename M::cplx;
  WeightMode mode = WeightMode::one_over_abs_derivative;
  std::vector<C> values;  // used in locally_constant mode

  C on_branch(const PiecewiseAffineMap<M>& map, int j) const {
    if (mode == WeightMode::locally_constant) {
      if (j < 0 || j >= int(values.size()))
        throw std::invalid_argument("weight: missing per-branch constant");
      return values[j];
    }
    R s = map.branch[j].slope;
    if (s < R(0)) s = -s;
    return scalar_traits<C>::one() / scalar_traits<C>::from_real(s);
  }

  /// Pointwise value with the half-sum convention at partition points.
  C at_point(const PiecewiseAffineMap<M>& map, const R& x, const PointCmp<M>& cmp) const {
    Jet<M> right(x, R(1)), left(x, R(-1));
    int cr = map.cell_of(right, cmp);
    int cl = map.cell_of(left, cmp);
    C two = scalar_traits<C>::from_int(2);
    if (cr >= 0 && cl >= 0) return (on_branch(map, cr) + on_branch(map, cl)) / two;
    if (cr >= 0) return on_branch(map, cr);
    if (cl >= 0) return on_branch(map, cl);
    return scalar_traits<C>::zero();
  }
};

/// One weighted affine branch: domain (u, v), homeomorphism psi, constant
/// weight supported on the domain, orientation sign.
template <class M>
struct Branch {
  using R = typename M::real;
  using C = typename M::cplx;
  R u, v;            // domain interval
  AffineRule<M> psi;
  C weight;
  int orient;        // sign of psi' on the domain

  R image_lo() const {
    R a = psi.eval(u), b = psi.eval(v);
    return a < b ? a : b;
  }
  R image_hi() const {
    R a = psi.eval(u), b = psi.eval(v);
    return a < b ? b : a;
  }
};

template <class M>
struct BranchSystem {
  std::vector<Branch<M>> branches;

  int size() const { return int(branches.size()); }

  bool all_contracting() const {
    for (const auto& b : branches) {
      double s = std::abs(to_double(b.psi.slope));
      if (s >= 1.0) return false;
    }
    return true;
  }
};

/// Inverse-branch system of a piecewise monotone affine map: one branch per
/// monotonicity cell, with domain f((a_j, a_{j+1})), map psi_j = (f|_j)^-1
/// and the cell's weight constant.  With derivative weights the induced
/// transfer operator matches sum_{fy=x} phi(y)/|f'(y)|.
template <class M>
BranchSystem<M> inverse_branches(const PiecewiseAffineMap<M>& map, const Weight<M>& w,
                                 const PointCmp<M>& cmp = {}) {
  map.validate(cmp);
  BranchSystem<M> bs;
  for (int j = 0; j < map.cells(); ++j) {
    Branch<M> b;
    auto lo = map.branch[j].eval(map.partition[j]);
    auto hi = map.branch[j].eval(map.partition[j + 1]);
    if (lo > hi) std::swap(lo, hi);
    b.u = lo;
    b.v = hi;
    b.psi = map.branch[j].inverse();
    b.weight = w.on_branch(map, j);
    b.orient = sign_of(b.psi.slope);
    bs.branches.push_back(std::move(b));
  }
  return bs;
}

/// Dual system: domains become images, maps invert, weights transport with
/// the orientation sign.  Involutive up to interval bookkeeping.
template <class M>
BranchSystem<M> dualize(const BranchSystem<M>& bs) {
  using C = typename M::cplx;
  BranchSystem<M> dual;
  for (const auto& b : bs.branches) {
    Branch<M> d;
    d.u = b.image_lo();
    d.v = b.image_hi();
    d.psi = b.psi.inverse();
    d.weight = b.orient > 0 ? b.weight : C(-b.weight);
    d.orient = b.orient;
    dual.branches.push_back(std::move(d));
  }
  return dual;
}

/// Branch composition graph: edge w -> w' when psi_w(I_w) meets I_w'.
template <class M>
std::vector<std::vector<int>> branch_transitions(const BranchSystem<M>& bs,
                                                 const PointCmp<M>& cmp = {}) {
  int n = bs.size();
  std::vector<std::vector<int>> out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto& a = bs.branches[i];
      const auto& b = bs.branches[j];
      auto lo = std::max(a.image_lo(), b.u);
      auto hi = std::min(a.image_hi(), b.v);
      if (cmp.less(lo, hi)) out[i].push_back(j);
    }
  return out;
}

enum class HatRMethod { cycle_mean, iterate_sup };

/// Contraction bound: the maximum geometric cycle mean of |psi'| over the
/// branch transition graph (Karp), or the n_max-step iterate supremum.
/// For an expanding map's inverse branches this is
/// limsup sup_x |(f^n)'(x)|^{-1/n}.
template <class M>
double hat_R(const BranchSystem<M>& bs, HatRMethod method = HatRMethod::cycle_mean,
             int n_max = 12, const PointCmp<M>& cmp = {}) {
  int n = bs.size();
  if (n == 0) throw std::invalid_argument("hat_R: empty branch system");
  auto adj = branch_transitions(bs, cmp);
  size_t edges = 0;
  for (auto& v : adj) edges += v.size();
  if (edges == 0) throw std::invalid_argument("hat_R: empty transition graph");

  std::vector<double> logs(n);
  for (int i = 0; i < n; ++i) logs[i] = std::log(std::abs(to_double(bs.branches[i].psi.slope)));

  constexpr double kNegInf = -1e300;
  if (method == HatRMethod::cycle_mean) {
    // Karp: d[k][v] = max log-weight of a k-edge walk ending at v.
    std::vector<std::vector<double>> d(n + 1, std::vector<double>(n, kNegInf));
    for (int v = 0; v < n; ++v) d[0][v] = 0.0;
    for (int k = 1; k <= n; ++k)
      for (int u = 0; u < n; ++u) {
        if (d[k - 1][u] == kNegInf) continue;
        for (int v : adj[u]) d[k][v] = std::max(d[k][v], d[k - 1][u] + logs[v]);
      }
    double best = kNegInf;
    for (int v = 0; v < n; ++v) {
      if (d[n][v] == kNegInf) continue;
      double worst = 1e300;
      for (int k = 0; k < n; ++k) {
        if (d[k][v] == kNegInf) continue;
        worst = std::min(worst, (d[n][v] - d[k][v]) / double(n - k));
      }
      best = std::max(best, worst);
    }
    if (best == kNegInf) return 0.0;  // no cycles: iterates die out
    return std::exp(best);
  }

  // iterate_sup
  std::vector<double> cur(n), nxt(n);
  for (int v = 0; v < n; ++v) cur[v] = logs[v];
  double best = kNegInf;
  for (int len = 1; len <= n_max; ++len) {
    double top = *std::max_element(cur.begin(), cur.end());
    best = std::max(best, top / double(len));
    std::fill(nxt.begin(), nxt.end(), kNegInf);
    for (int u = 0; u < n; ++u) {
      if (cur[u] == kNegInf) continue;
      for (int v : adj[u]) nxt[v] = std::max(nxt[v], cur[u] + logs[v]);
    }
    cur.swap(nxt);
  }
  return best == kNegInf ? 0.0 : std::exp(best);
}

/// Minimum geometric cycle mean of |psi'|; bookkeeping partner of hat_R.
template <class M>
double min_cycle_mean(const BranchSystem<M>& bs, const PointCmp<M>& cmp = {}) {
  int n = bs.size();
  auto adj = branch_transitions(bs, cmp);
  std::vector<double> logs(n);
  for (int i = 0; i < n; ++i) logs[i] = std::log(std::abs(to_double(bs.branches[i].psi.slope)));
  constexpr double kInf = 1e300;
  std::vector<std::vector<double>> d(n + 1, std::vector<double>(n, kInf));
  for (int v = 0; v < n; ++v) d[0][v] = 0.0;
  for (int k = 1; k <= n; ++k)
    for (int u = 0; u < n; ++u) {
      if (d[k - 1][u] == kInf) continue;
      for (int v : adj[u]) d[k][v] = std::min(d[k][v], d[k - 1][u] + logs[v]);
    }
  double best = kInf;
  for (int v = 0; v < n; ++v) {
    if (d[n][v] == kInf) continue;
    double worst = -kInf;
    for (int k = 0; k < n; ++k) {
      if (d[k][v] == kInf) continue;
      worst = std::max(worst, (d[n][v] - d[k][v]) / double(n - k));
    }
    best = std::min(best, worst);
  }
  return best == kInf ? 0.0 : std::exp(best);
}

}  // namespace kneadlab
