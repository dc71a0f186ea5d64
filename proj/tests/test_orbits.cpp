#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "kneadlab/orbits.hpp"
#include "test_util.hpp"

using namespace kneadlab;

namespace {

// Distinct fixed points after identifying the right endpoint with the left
// (the circle reading of wrap maps).
template <class M>
int identified_point_count(const std::vector<PeriodicOrbitRecord<M>>& recs,
                           const PiecewiseAffineMap<M>& map, const PointCmp<M>& cmp) {
  std::vector<typename M::real> pts;
  for (const auto& r : recs) {
    auto p = cmp.equal(r.point, map.aN()) ? map.a0() : r.point;
    bool seen = false;
    for (const auto& q : pts) seen = seen || cmp.equal(p, q);
    if (!seen) pts.push_back(p);
  }
  return int(pts.size());
}

}  // namespace

TEST_CASE("doubling map, period 2") {
  auto doc = load_fixture("doubling");
  auto map = build_map<RationalMode>(doc);
  auto w = build_weight<RationalMode>(doc);
  PointCmp<RationalMode> cmp;
  auto recs = fixed_points_of_iterate(map, w, 2, cmp);
  REQUIRE(recs.size() == 4);
  std::set<Rational> pts;
  for (const auto& r : recs) pts.insert(r.point);
  CHECK(pts == std::set<Rational>{Rational(0), Rational(1) / 3, Rational(2) / 3, Rational(1)});
  CHECK(identified_point_count(recs, map, cmp) == 3);
  for (const auto& r : recs) {
    CHECK(r.derivative == Rational(4));
    CHECK(r.weight_product == ComplexRational(Rational(1) / 4));
    CHECK(r.lefschetz == -1);
  }
}

TEST_CASE("below-diagonal map has only the boundary fixed point") {
  auto doc = load_fixture("f0_belowdiag");
  auto map = build_map<RationalMode>(doc);
  auto w = build_weight<RationalMode>(doc);
  PointCmp<RationalMode> cmp;
  for (int n = 1; n <= 6; ++n) {
    auto recs = fixed_points_of_iterate(map, w, n, cmp);
    for (const auto& r : recs) {
      CHECK(r.point == Rational(0));
      CHECK(r.endpoint_flag);
    }
  }
}

TEST_CASE("tent map fixed points") {
  auto doc = load_fixture("tent");
  auto map = build_map<RationalMode>(doc);
  auto w = build_weight<RationalMode>(doc);
  PointCmp<RationalMode> cmp;
  auto recs = fixed_points_of_iterate(map, w, 1, cmp);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].point == Rational(0));
  CHECK(recs[0].endpoint_flag);
  CHECK(recs[0].orientation == 0);  // boundary orbit
  CHECK(recs[1].point == Rational(2) / 3);
  CHECK(recs[1].orientation == -1);
  CHECK(!recs[1].endpoint_flag);
}

TEST_CASE("negative fixed points of the tent map") {
  auto doc = load_fixture("tent");
  auto map = build_map<RationalMode>(doc);
  auto w = build_weight<RationalMode>(doc);
  PointCmp<RationalMode> cmp;

  auto n1 = negative_fixed_points(map, w, 1, cmp);
  REQUIRE(n1.size() == 1);
  CHECK(n1[0].point == Rational(2) / 3);

  auto n2 = negative_fixed_points(map, w, 2, cmp);
  REQUIRE(n2.size() == 2);
  CHECK(n2[0].point == Rational(2) / 5);
  CHECK(n2[1].point == Rational(4) / 5);

  // |Fix^- f^n| never exceeds the lap count of f^n
  for (int n = 1; n <= 8; ++n)
    CHECK(int(negative_fixed_points(map, w, n, cmp).size()) <= 1 << n);
}

TEST_CASE("negative fixed points need continuity") {
  auto doc = load_fixture("doubling");
  auto map = build_map<RationalMode>(doc);
  auto w = build_weight<RationalMode>(doc);
  CHECK_THROWS_AS(negative_fixed_points(map, w, 1, PointCmp<RationalMode>{}),
                  std::invalid_argument);
}

TEST_CASE("below-diagonal map has no negative fixed points") {
  auto doc = load_fixture("f0_belowdiag");
  auto map = build_map<RationalMode>(doc);
  auto w = build_weight<RationalMode>(doc);
  PointCmp<RationalMode> cmp;
  for (int n = 1; n <= 6; ++n) CHECK(negative_fixed_points(map, w, n, cmp).empty());
}

TEST_CASE("branch words of the doubling inverse system") {
  auto bs = build_system<RationalMode>(load_fixture("doubling"));
  PointCmp<RationalMode> cmp;

  auto n1 = branch_word_fixed_points(bs, 1, cmp);
  REQUIRE(n1.size() == 2);
  CHECK(n1[0].point == Rational(0));
  CHECK(n1[1].point == Rational(1));
  for (const auto& r : n1) {
    CHECK(r.weight_product == ComplexRational(Rational(1) / 2));
    CHECK(r.lefschetz == 1);
    CHECK(r.endpoint_flag);
  }

  auto n3 = branch_word_fixed_points(bs, 3, cmp);
  REQUIRE(n3.size() == 8);
  ComplexRational total;
  for (const auto& r : n3) total += r.weight_product;
  CHECK(total == ComplexRational(Rational(1)));
}

TEST_CASE("empty-overlap branch system yields no words") {
  // psi_0 maps into a gap disjoint from every branch interval
  BranchSystem<RationalMode> bs;
  Branch<RationalMode> b;
  b.u = Rational(0);
  b.v = Rational(1) / 4;
  b.psi = {Rational(1) / 4, Rational(1) / 2};  // image (1/2, 9/16), outside (0, 1/4)
  b.weight = ComplexRational(Rational(1));
  b.orient = 1;
  bs.branches.push_back(b);
  PointCmp<RationalMode> cmp;
  CHECK(branch_word_fixed_points(bs, 2, cmp).empty());
  // the single admissible 1-word has no fixed point inside its domain
  CHECK(branch_word_fixed_points(bs, 1, cmp).empty());
}

TEST_CASE("slope-one composition is a named error") {
  PiecewiseAffineMap<RationalMode> map;
  map.partition = {Rational(0), Rational(1)};
  map.branch = {{Rational(-1), Rational(1)}};  // f(x) = 1 - x
  Weight<RationalMode> w{WeightMode::locally_constant, {ComplexRational(Rational(1))}};
  PointCmp<RationalMode> cmp;
  CHECK(fixed_points_of_iterate(map, w, 1, cmp).size() == 1);  // x = 1/2
  CHECK_THROWS_WITH_AS(fixed_points_of_iterate(map, w, 2, cmp),
                       doctest::Contains("slope-1"), std::domain_error);
}

TEST_CASE("doubling map satisfies |Fix f^n| = 2^n - 1 after identification") {
  auto doc = load_fixture("doubling");
  auto map = build_map<RationalMode>(doc);
  auto w = build_weight<RationalMode>(doc);
  PointCmp<RationalMode> cmp;
  for (int n = 1; n <= 12; ++n) {
    auto recs = fixed_points_of_iterate(map, w, n, cmp);
    CHECK(int(recs.size()) == (1 << n));
    CHECK(identified_point_count(recs, map, cmp) == (1 << n) - 1);
  }
}

TEST_CASE("orbit sums survive refining the partition by a spurious breakpoint") {
  auto doc = load_fixture("doubling");
  auto map = build_map<RationalMode>(doc);
  auto w = build_weight<RationalMode>(doc);

  PiecewiseAffineMap<RationalMode> refined;
  refined.partition = {Rational(0), Rational(1) / 4, Rational(1) / 2, Rational(1)};
  refined.branch = {{Rational(2), Rational(0)}, {Rational(2), Rational(0)},
                    {Rational(2), Rational(-1)}};
  Weight<RationalMode> rw;  // 1/|f'| mode matches the original weights

  PointCmp<RationalMode> cmp;
  for (int n = 1; n <= 8; ++n) {
    ComplexRational a, b;
    for (const auto& r : fixed_points_of_iterate(map, w, n, cmp)) a += r.weight_product;
    for (const auto& r : fixed_points_of_iterate(refined, rw, n, cmp)) b += r.weight_product;
    CHECK(a == b);
  }
}

TEST_CASE("inverse-branch words recover Fix f^n with matching weights") {
  auto doc = load_fixture("markov3");
  auto map = build_map<RationalMode>(doc);
  auto w = build_weight<RationalMode>(doc);
  auto bs = build_system<RationalMode>(doc);
  PointCmp<RationalMode> cmp;
  for (int n = 1; n <= 5; ++n) {
    auto forward = fixed_points_of_iterate(map, w, n, cmp);
    auto words = branch_word_fixed_points(bs, n, cmp);
    // compare unflagged records as (point, weight) multisets
    std::multiset<std::pair<Rational, Rational>> a, b;
    for (const auto& r : forward)
      if (!r.endpoint_flag) a.insert({r.point, r.weight_product.re});
    for (const auto& r : words)
      if (!r.endpoint_flag) b.insert({r.point, r.weight_product.re});
    CHECK(a == b);
  }
}
