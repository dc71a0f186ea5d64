#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "kneadlab/map_model.hpp"

namespace kneadlab {

template <class M>
struct PeriodicOrbitRecord {
  using R = typename M::real;
  using C = typename M::cplx;
  int period = 0;
  R point{};
  std::vector<int> word;
  C weight_product{};
  int orientation = 0;  // product of branch signs along the word; 0 when the
                        // orbit meets a partition point
  R derivative{};       // composition slope
  int lefschetz = 0;    // sign(1 - composition slope)
  bool endpoint_flag = false;
};

inline std::string word_to_string(const std::vector<int>& w) {
  std::string s;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(w[i]);
  }
  return s;
}

inline std::vector<int> minimal_rotation(const std::vector<int>& w) {
  std::vector<int> best = w;
  std::vector<int> rot = w;
  for (size_t k = 1; k < w.size(); ++k) {
    std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    if (rot < best) best = rot;
  }
  return best;
}

/// State of a composed affine word x -> A x + B.  Exact arithmetic carries
/// the forward image [img_lo, img_hi] of the surviving domain (the walk is
/// then division-free); float additionally carries the domain [dom_lo,
/// dom_hi] itself, because the fixed point's margin to the domain is what
/// stays numerically meaningful for deep words.
template <class M>
struct WordFrame {
  using R = typename M::real;
  using C = typename M::cplx;
  R A, B;
  R img_lo, img_hi;
  R dom_lo{}, dom_hi{};  // float mode only
  C weight;              // product of the piece weights
  int orient = 1;

  R fixed_point() const { return B / (R(1) - A); }

  /// sign(x* - t): t is an image marker in exact mode, a domain marker in
  /// float mode (for a fixed point the two intervals agree on membership).
  int fixed_point_side(const R& t, const PointCmp<M>& cmp) const {
    if constexpr (M::exact) {
      // x* - t = (B - (1-A)t)/(1-A), compared without dividing
      R lhs = B - (R(1) - A) * t;
      int s = lhs == R(0) ? 0 : sign_of(lhs);
      return (A < R(1)) ? s : -s;
    } else {
      R d = fixed_point() - t;
      return cmp.equal(d, R(0)) ? 0 : sign_of(d);
    }
  }

  int side_lo(const PointCmp<M>& cmp) const {
    if constexpr (M::exact)
      return fixed_point_side(img_lo, cmp);
    else
      return fixed_point_side(dom_lo, cmp);
  }
  int side_hi(const PointCmp<M>& cmp) const {
    if constexpr (M::exact)
      return fixed_point_side(img_hi, cmp);
    else
      return fixed_point_side(dom_hi, cmp);
  }

  bool fixed_point_in_domain(const PointCmp<M>& cmp) const {
    return side_lo(cmp) >= 0 && side_hi(cmp) <= 0;
  }

  bool fixed_point_on_boundary(const PointCmp<M>& cmp) const {
    return side_lo(cmp) == 0 || side_hi(cmp) == 0;
  }

  /// sign(composition(e) - e) at the lower/upper domain endpoint.
  int displacement_sign_lo(const PointCmp<M>& cmp) const {
    if constexpr (M::exact)
      return displacement_at_image(A > R(0) ? img_lo : img_hi);
    else
      return displacement_float(dom_lo, A > R(0) ? img_lo : img_hi, cmp);
  }
  int displacement_sign_hi(const PointCmp<M>& cmp) const {
    if constexpr (M::exact)
      return displacement_at_image(A > R(0) ? img_hi : img_lo);
    else
      return displacement_float(dom_hi, A > R(0) ? img_hi : img_lo, cmp);
  }

 private:
  int displacement_at_image(const R& t) const {
    // e = preimage of t; sign(comp(e) - e) = sign((A-1)t + B) * sign(A)
    R lhs = (A - R(1)) * t + B;
    int s = lhs == R(0) ? 0 : sign_of(lhs);
    return A > R(0) ? s : -s;
  }
  int displacement_float(const R& e, const R& image_of_e, const PointCmp<M>& cmp) const {
    R d = image_of_e - e;  // both endpoints were accumulated stepwise
    return cmp.equal(d, R(0)) ? 0 : sign_of(d);
  }
};

/// Shared affine-word walker.  Enumerates words of affine pieces (domain
/// (u_k, v_k), rule x -> s_k x + b_k, constant weight, sign), pruning words
/// whose composed domain is empty.  Emptiness is a strict interval test:
/// the surviving domain of a deep contracting word is legitimately tiny and
/// must not be fuzzed away.  With all_depths the visitor sees every prefix
/// word (depth passed via word.size()); otherwise only length-n words.
template <class M, class F>
void for_each_affine_word(const std::vector<Branch<M>>& pieces, int n, const PointCmp<M>& cmp,
                          F&& visit, bool all_depths = false) {
  using R = typename M::real;
  if (n < 1) throw std::invalid_argument("affine words: n must be >= 1");
  if (pieces.empty()) return;
  (void)cmp;

  std::vector<int> word;
  word.reserve(n);

  auto dfs = [&](auto&& self, const WordFrame<M>& f, int depth) -> void {
    if (all_depths || depth == n) visit(word, f);
    if (depth == n) return;
    for (int k = 0; k < int(pieces.size()); ++k) {
      const auto& br = pieces[k];
      R lo = std::max(f.img_lo, br.u);
      R hi = std::min(f.img_hi, br.v);
      // Exact intervals prune on emptiness including the touching case; in
      // float a deep word's intervals collapse to a single representable
      // point and must stay alive.
      if constexpr (M::exact) {
        if (!(lo < hi)) continue;
      } else {
        if (lo > hi) continue;
      }
      WordFrame<M> g;
      g.A = br.psi.slope * f.A;
      g.B = br.psi.slope * f.B + br.psi.intercept;
      if constexpr (!M::exact) {
        // shrink the domain to the preimage of the binding constraints
        R dlo = f.dom_lo, dhi = f.dom_hi;
        if (lo > f.img_lo || hi < f.img_hi) {
          R plo = (lo - f.B) / f.A;
          R phi = (hi - f.B) / f.A;
          if (plo > phi) std::swap(plo, phi);
          dlo = std::max(dlo, plo);
          dhi = std::min(dhi, phi);
          if (dlo > dhi) dlo = dhi = (dlo + dhi) / 2;  // collapsed by rounding
        }
        g.dom_lo = dlo;
        g.dom_hi = dhi;
      }
      R a = br.psi.slope * lo + br.psi.intercept;
      R b = br.psi.slope * hi + br.psi.intercept;
      if (a <= b) {
        g.img_lo = std::move(a);
        g.img_hi = std::move(b);
      } else {
        g.img_lo = std::move(b);
        g.img_hi = std::move(a);
      }
      g.weight = f.weight * br.weight;
      g.orient = f.orient * br.orient;
      word.push_back(k);
      self(self, g, depth + 1);
      word.pop_back();
    }
  };

  for (int k = 0; k < int(pieces.size()); ++k) {
    const auto& br = pieces[k];
    WordFrame<M> f;
    f.A = br.psi.slope;
    f.B = br.psi.intercept;
    f.img_lo = br.image_lo();
    f.img_hi = br.image_hi();
    f.dom_lo = br.u;
    f.dom_hi = br.v;
    f.weight = br.weight;
    f.orient = br.orient;
    word.push_back(k);
    dfs(dfs, f, 1);
    word.pop_back();
  }
}

namespace detail {

/// The forward map's monotone pieces in the affine-word format, with the
/// per-cell weight constants attached.
template <class M>
std::vector<Branch<M>> forward_pieces(const PiecewiseAffineMap<M>& map, const Weight<M>& w) {
  std::vector<Branch<M>> pieces;
  for (int j = 0; j < map.cells(); ++j) {
    Branch<M> b;
    b.u = map.partition[j];
    b.v = map.partition[j + 1];
    b.psi = map.branch[j];
    b.weight = w.on_branch(map, j);
    b.orient = map.branch_sign(j);
    pieces.push_back(std::move(b));
  }
  return pieces;
}

template <class M>
void degenerate_check(const WordFrame<M>& f, const std::vector<int>& word,
                      const PointCmp<M>& cmp, const char* who) {
  using R = typename M::real;
  if (cmp.equal(f.A, R(1)) && cmp.equal(f.B, R(0)))
    throw std::domain_error(std::string(who) +
                            ": slope-1 composition with an interval of fixed points, word " +
                            word_to_string(word));
}

/// Was a partition/domain endpoint met along the fixed orbit?  Exact mode
/// answers from the domain boundary; float mode rechecks ambiguous cases
/// against the original endpoints, where the tolerance has its natural
/// scale (deep contracting words shrink the domain below any tolerance).
template <class M>
bool fixed_orbit_flagged(const std::vector<Branch<M>>& pieces, const std::vector<int>& word,
                         const WordFrame<M>& f, const PointCmp<M>& cmp) {
  if constexpr (M::exact) {
    return f.fixed_point_on_boundary(cmp);
  } else {
    int slo = f.side_lo(cmp);
    int shi = f.side_hi(cmp);
    if (slo > 0 && shi < 0) return false;  // clear of both boundaries
    auto p = f.fixed_point();
    for (int k : word) {
      const auto& br = pieces[k];
      if (cmp.equal(p, br.u) || cmp.equal(p, br.v)) return true;
      p = br.psi.eval(p);
    }
    return false;
  }
}

}  // namespace detail

/// Streams one record per admissible length-n cell word whose composition
/// fixes a point of the closed composed domain.  Orbits touching a
/// partition point are flagged (orientation 0), not dropped.  Degenerate
/// slope-1 compositions raise an error naming the word when an interval of
/// fixed points exists, and are skipped when there is no fixed point.
template <class M, class F>
void for_each_fixed_point(const PiecewiseAffineMap<M>& map, const Weight<M>& w, int n,
                          const PointCmp<M>& cmp, F&& visit) {
  using R = typename M::real;
  map.validate(cmp);
  auto pieces = detail::forward_pieces(map, w);
  for_each_affine_word(pieces, n, cmp, [&](const std::vector<int>& word, const WordFrame<M>& f) {
    if (cmp.equal(f.A, R(1))) {
      detail::degenerate_check(f, word, cmp, "fixed points");
      return;  // parallel to the diagonal: no fixed point
    }
    if (!f.fixed_point_in_domain(cmp)) return;
    bool flagged = detail::fixed_orbit_flagged(pieces, word, f, cmp);
    PeriodicOrbitRecord<M> rec;
    rec.period = n;
    rec.point = f.fixed_point();
    rec.word = word;
    rec.weight_product = f.weight;
    rec.orientation = flagged ? 0 : f.orient;
    rec.derivative = f.A;
    rec.lefschetz = f.A < R(1) ? 1 : -1;
    rec.endpoint_flag = flagged;
    visit(std::move(rec));
  });
}

/// Fixed points of the n-th iterate as a list, in deterministic word order.
/// Flagged records describing the same point by rotated words are merged.
template <class M>
std::vector<PeriodicOrbitRecord<M>> fixed_points_of_iterate(const PiecewiseAffineMap<M>& map,
                                                            const Weight<M>& w, int n,
                                                            const PointCmp<M>& cmp = {}) {
  std::vector<PeriodicOrbitRecord<M>> out;
  for_each_fixed_point(map, w, n, cmp, [&](PeriodicOrbitRecord<M>&& rec) {
    if (rec.endpoint_flag) {
      auto key = minimal_rotation(rec.word);
      for (const auto& o : out)
        if (o.endpoint_flag && cmp.equal(o.point, rec.point) && minimal_rotation(o.word) == key)
          return;
    }
    out.push_back(std::move(rec));
  });
  return out;
}

/// Fixed points of f^n around which f^n decreases; requires a continuous
/// map.  Counted per point.
template <class M>
std::vector<PeriodicOrbitRecord<M>> negative_fixed_points(const PiecewiseAffineMap<M>& map,
                                                          const Weight<M>& w, int n,
                                                          const PointCmp<M>& cmp = {}) {
  if (!map.continuous(cmp))
    throw std::invalid_argument("negative_fixed_points: map must be continuous");
  // Interior records are unique per point (two cell words can only share a
  // fixed point on a cell boundary, and boundary orbits have orientation 0),
  // so filtering by orientation already counts points.
  std::vector<PeriodicOrbitRecord<M>> out;
  for_each_fixed_point(map, w, n, cmp, [&](PeriodicOrbitRecord<M>&& r) {
    if (r.orientation == -1) out.push_back(std::move(r));
  });
  return out;
}

/// Walks every admissible length-n branch word of a branch system.
template <class M, class F>
void for_each_branch_word(const BranchSystem<M>& bs, int n, const PointCmp<M>& cmp, F&& visit) {
  for_each_affine_word(bs.branches, n, cmp, visit);
}

/// Fixed points of n-fold branch compositions psi_{w_n} o ... o psi_{w_1},
/// one record per admissible word whose composition fixes a point of the
/// closed composed domain.  Weights are full products of the branch
/// constants; the Lefschetz sign is sign(1 - composition slope).
template <class M>
std::vector<PeriodicOrbitRecord<M>> branch_word_fixed_points(const BranchSystem<M>& bs, int n,
                                                             const PointCmp<M>& cmp = {}) {
  using R = typename M::real;
  std::vector<PeriodicOrbitRecord<M>> out;
  for_each_affine_word(bs.branches, n, cmp, [&](const std::vector<int>& word,
                                                const WordFrame<M>& f) {
    if (cmp.equal(f.A, R(1)))
      throw std::domain_error("branch_word_fixed_points: degenerate slope-1 composition, word " +
                              word_to_string(word));
    if (!f.fixed_point_in_domain(cmp)) return;
    PeriodicOrbitRecord<M> rec;
    rec.period = n;
    rec.point = f.fixed_point();
    rec.word = word;
    rec.weight_product = f.weight;
    rec.derivative = f.A;
    rec.lefschetz = f.A < R(1) ? 1 : -1;
    rec.orientation = f.orient;
    rec.endpoint_flag = detail::fixed_orbit_flagged(bs.branches, word, f, cmp);
    out.push_back(std::move(rec));
  });
  return out;
}

}  // namespace kneadlab
