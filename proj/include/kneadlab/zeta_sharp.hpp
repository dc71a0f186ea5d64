#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "kneadlab/orbits.hpp"
#include "kneadlab/series.hpp"

namespace kneadlab {

enum class EndpointPolicy { exclude, include, error_on_flagged };

inline const char* to_string(EndpointPolicy p) {
  switch (p) {
    case EndpointPolicy::exclude: return "exclude";
    case EndpointPolicy::include: return "include";
    default: return "error";
  }
}

/// True when the map fixes both outer endpoints (f(a_0+) = a_0 and
/// f(a_N-) = a_N), i.e. the interval is a cut-open circle and the two
/// boundary fixed points are one circle point.
template <class M>
bool wraps_endpoints(const PiecewiseAffineMap<M>& map, const PointCmp<M>& cmp = {}) {
  using R = typename M::real;
  R f0 = map.branch.front().eval(map.a0());
  R f1 = map.branch.back().eval(map.aN());
  return cmp.equal(f0, map.a0()) && cmp.equal(f1, map.aN());
}

template <class M>
struct ZetaReport {
  using C = typename M::cplx;
  TruncatedSeries<C> zeta;
  std::vector<C> per_n_sums;  // index 0 unused
  std::vector<std::string> endpoint_warnings;
  EndpointPolicy policy{};
  bool wrap_identified = false;
};

/// The weighted zeta function exp sum z^n/n sum_{Fix f^n} prod g, with
/// endpoint-flagged points handled by policy:
///  - include: count every enumerated record;
///  - exclude: on wrap maps, identify a_N with a_0 and count the merged
///    class once; every record still flagged afterwards is dropped;
///  - error: abort when flagged orbits exist.
template <class M>
ZetaReport<M> zeta_series(const PiecewiseAffineMap<M>& map, const Weight<M>& w, int K,
                          EndpointPolicy policy, const PointCmp<M>& cmp = {}) {
  using C = typename M::cplx;
  if (K < 1) throw std::invalid_argument("zeta_series: K must be >= 1");
  ZetaReport<M> rep;
  rep.policy = policy;
  rep.per_n_sums.assign(K + 1, scalar_traits<C>::zero());
  bool wrap = wraps_endpoints(map, cmp);

  using R = typename M::real;
  map.validate(cmp);
  auto pieces = detail::forward_pieces(map, w);

  // One walk over all word prefixes; flagged records are rare and kept for
  // the per-period merge/drop decisions.
  std::vector<C> sums(K + 1, scalar_traits<C>::zero());
  std::vector<std::vector<PeriodicOrbitRecord<M>>> flagged(K + 1);
  for_each_affine_word(
      pieces, K, cmp,
      [&](const std::vector<int>& word, const WordFrame<M>& f) {
        int n = int(word.size());
        if (cmp.equal(f.A, R(1))) {
          detail::degenerate_check(f, word, cmp, "zeta_series");
          return;
        }
        if (!f.fixed_point_in_domain(cmp)) return;
        if (!detail::fixed_orbit_flagged(pieces, word, f, cmp)) {
          sums[n] += f.weight;
          return;
        }
        PeriodicOrbitRecord<M> r;
        r.period = n;
        r.point = f.fixed_point();
        r.word = word;
        r.weight_product = f.weight;
        r.endpoint_flag = true;
        auto key = minimal_rotation(r.word);
        for (const auto& o : flagged[n])
          if (cmp.equal(o.point, r.point) && minimal_rotation(o.word) == key) return;
        flagged[n].push_back(std::move(r));
      },
      /*all_depths=*/true);

  for (int n = 1; n <= K; ++n) {
    C sum = sums[n];
    bool have_a0_class = false;
    for (const auto& r : flagged[n]) {
      std::ostringstream os;
      os << "n=" << n << " word=" << word_to_string(r.word) << " x=" << to_double(r.point)
         << " (endpoint orbit)";
      rep.endpoint_warnings.push_back(os.str());
      if (policy == EndpointPolicy::error_on_flagged)
        throw std::domain_error("zeta_series: endpoint orbit with error policy: " +
                                rep.endpoint_warnings.back());
      bool counted = true;
      if (policy == EndpointPolicy::exclude) {
        if (wrap && (cmp.equal(r.point, map.a0()) || cmp.equal(r.point, map.aN()))) {
          // a_0 and a_N are one circle point: count the class once.
          if (have_a0_class) {
            counted = false;
            rep.wrap_identified = true;
          } else {
            have_a0_class = true;
          }
        } else {
          counted = false;
        }
      }
      if (counted) sum += r.weight_product;
    }
    rep.per_n_sums[n] = sum;
  }

  TruncatedSeries<C> logz(K);
  for (int n = 1; n <= K; ++n) logz[n] = rep.per_n_sums[n] / scalar_traits<C>::from_int(n);
  rep.zeta = series_exp(logz);
  return rep;
}

/// Negative zeta: exp sum (z^n/n) 2 #Fix^-(f^n).  Requires continuity.
/// Counted in one walk over all word lengths; boundary orbits carry
/// orientation 0 and never enter Fix^-.
template <class M>
TruncatedSeries<typename M::cplx> negative_zeta_series(const PiecewiseAffineMap<M>& map, int K,
                                                       const PointCmp<M>& cmp = {}) {
  using R = typename M::real;
  using C = typename M::cplx;
  if (!map.continuous(cmp))
    throw std::invalid_argument("negative_zeta_series: map must be continuous");
  map.validate(cmp);
  Weight<M> unit{WeightMode::locally_constant,
                 std::vector<C>(map.cells(), scalar_traits<C>::one())};
  auto pieces = detail::forward_pieces(map, unit);
  std::vector<long> counts(K + 1, 0);
  for_each_affine_word(
      pieces, K, cmp,
      [&](const std::vector<int>& word, const WordFrame<M>& f) {
        if (f.orient != -1) return;
        if (cmp.equal(f.A, R(1))) {
          detail::degenerate_check(f, word, cmp, "negative_zeta_series");
          return;
        }
        if (!f.fixed_point_in_domain(cmp) || f.fixed_point_on_boundary(cmp)) return;
        ++counts[word.size()];
      },
      /*all_depths=*/true);
  TruncatedSeries<C> logz(K);
  for (int n = 1; n <= K; ++n)
    logz[n] = scalar_traits<C>::from_int(2 * counts[n]) / scalar_traits<C>::from_int(n);
  return series_exp(logz);
}

template <class M>
struct SharpTraceResult {
  using C = typename M::cplx;
  C orbit_form{};    // sum over word fixed points of weight * sign(1 - slope)
  C atomic_form{};   // literal jump-sum with sgn(0) = 0
  double agreement() const { return abs_cd(orbit_form - atomic_form); }
};

/// Sharp trace of the n-th operator power, computed two ways: the orbit
/// (Lefschetz) form, which is the returned value, and the literal
/// atomic-integral form, kept for the report.  The two differ exactly when
/// some composition fixes an endpoint of its domain.
template <class M>
SharpTraceResult<M> sharp_trace(const BranchSystem<M>& bs, int n, const PointCmp<M>& cmp = {}) {
  using R = typename M::real;
  using C = typename M::cplx;
  SharpTraceResult<M> res;
  res.orbit_form = scalar_traits<C>::zero();
  res.atomic_form = scalar_traits<C>::zero();
  if (bs.size() == 0) return res;

  auto half = scalar_traits<C>::from_ratio(1, 2);
  for_each_affine_word(bs.branches, n, cmp,
                       [&](const std::vector<int>& word, const WordFrame<M>& f) {
    if (cmp.equal(f.A, R(1)))
      throw std::domain_error("sharp_trace: degenerate slope-1 composition, word " +
                              word_to_string(word));

    // Orbit form: full weight at the unique fixed point of the closed
    // domain, Lefschetz sign.
    if (f.fixed_point_in_domain(cmp)) {
      C s = scalar_traits<C>::from_int(f.A < R(1) ? 1 : -1);
      res.orbit_form += f.weight * s;
    }

    // Atomic form: the jump sum of sgn(psi_w(x) - x)/2 against the composed
    // weight measure, with sgn(0) = 0.  The jump at the lower domain
    // endpoint is positive; its image is img_lo when the composition
    // preserves orientation and img_hi otherwise.
    int disp_at_lo = f.displacement_sign_lo(cmp);
    int disp_at_hi = f.displacement_sign_hi(cmp);
    res.atomic_form += f.weight * (scalar_traits<C>::from_int(disp_at_lo - disp_at_hi) * half);
  });
  return res;
}

template <class M>
struct SharpReport {
  using C = typename M::cplx;
  std::vector<C> traces;         // Tr# M^n for n = 1..K (index 0 unused)
  std::vector<C> atomic_traces;  // literal integral form
  TruncatedSeries<C> det_sharp;
  double orbit_vs_atomic = 0;    // max residual between the two forms
};

/// Det#(1 - zM) = exp - sum z^n/n Tr# M^n from the orbit-form traces.
/// One walk serves every trace order.
template <class M>
SharpReport<M> sharp_det_series(const BranchSystem<M>& bs, int K, const PointCmp<M>& cmp = {}) {
  using R = typename M::real;
  using C = typename M::cplx;
  if (K < 1) throw std::invalid_argument("sharp_det_series: K must be >= 1");
  SharpReport<M> rep;
  rep.traces.assign(K + 1, scalar_traits<C>::zero());
  rep.atomic_traces.assign(K + 1, scalar_traits<C>::zero());
  if (bs.size() > 0) {
    auto half = scalar_traits<C>::from_ratio(1, 2);
    for_each_affine_word(
        bs.branches, K, cmp,
        [&](const std::vector<int>& word, const WordFrame<M>& f) {
          int n = int(word.size());
          if (cmp.equal(f.A, R(1)))
            throw std::domain_error("sharp_det_series: degenerate slope-1 composition, word " +
                                    word_to_string(word));
          if (f.fixed_point_in_domain(cmp)) {
            C s = scalar_traits<C>::from_int(f.A < R(1) ? 1 : -1);
            rep.traces[n] += f.weight * s;
          }
          int disp_lo = f.displacement_sign_lo(cmp);
          int disp_hi = f.displacement_sign_hi(cmp);
          rep.atomic_traces[n] +=
              f.weight * (scalar_traits<C>::from_int(disp_lo - disp_hi) * half);
        },
        /*all_depths=*/true);
  }
  TruncatedSeries<C> logz(K);
  for (int n = 1; n <= K; ++n) {
    rep.orbit_vs_atomic =
        std::max(rep.orbit_vs_atomic, abs_cd(rep.traces[n] - rep.atomic_traces[n]));
    logz[n] = -(rep.traces[n] / scalar_traits<C>::from_int(n));
  }
  rep.det_sharp = series_exp(logz);
  return rep;
}

}  // namespace kneadlab
