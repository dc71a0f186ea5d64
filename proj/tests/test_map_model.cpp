#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "kneadlab/map_model.hpp"
#include "test_util.hpp"

using namespace kneadlab;

TEST_CASE("inverse branches of the doubling map") {
  auto doc = load_fixture("doubling");
  auto map = build_map<RationalMode>(doc);
  auto w = build_weight<RationalMode>(doc);
  auto bs = inverse_branches(map, w);

  REQUIRE(bs.size() == 2);
  CHECK(bs.branches[0].psi.slope == Rational(1) / 2);
  CHECK(bs.branches[0].psi.intercept == Rational(0));
  CHECK(bs.branches[1].psi.slope == Rational(1) / 2);
  CHECK(bs.branches[1].psi.intercept == Rational(1) / 2);
  for (const auto& b : bs.branches) {
    CHECK(b.u == Rational(0));
    CHECK(b.v == Rational(1));
    CHECK(b.weight == ComplexRational(Rational(1) / 2));
    CHECK(b.orient == 1);
  }
}

TEST_CASE("inverse branch of a single expanding branch") {
  PiecewiseAffineMap<RationalMode> map;
  map.partition = {Rational(0), Rational(1) / 3};
  map.branch = {{Rational(3), Rational(0)}};
  Weight<RationalMode> w;  // 1/|f'|
  auto bs = inverse_branches(map, w);
  REQUIRE(bs.size() == 1);
  CHECK(bs.branches[0].psi.slope == Rational(1) / 3);
  CHECK(bs.branches[0].u == Rational(0));
  CHECK(bs.branches[0].v == Rational(1));
  CHECK(bs.branches[0].weight == ComplexRational(Rational(1) / 3));
}

TEST_CASE("inverse branches of the tent map") {
  auto doc = load_fixture("tent");
  auto map = build_map<RationalMode>(doc);
  auto w = build_weight<RationalMode>(doc);
  auto bs = inverse_branches(map, w);
  REQUIRE(bs.size() == 2);
  CHECK(bs.branches[0].psi.slope == Rational(1) / 2);
  CHECK(bs.branches[0].orient == 1);
  CHECK(bs.branches[1].psi.slope == Rational(-1) / 2);
  CHECK(bs.branches[1].psi.intercept == Rational(1));
  CHECK(bs.branches[1].orient == -1);
  CHECK(bs.branches[1].weight == ComplexRational(Rational(1) / 2));
}

TEST_CASE("dual of the doubling inverse branches is the forward map") {
  auto doc = load_fixture("doubling");
  auto bs = build_system<RationalMode>(doc);
  auto dual = dualize(bs);
  REQUIRE(dual.size() == 2);
  CHECK(dual.branches[0].psi.slope == Rational(2));
  CHECK(dual.branches[0].u == Rational(0));
  CHECK(dual.branches[0].v == Rational(1) / 2);
  CHECK(dual.branches[1].psi.slope == Rational(2));
  CHECK(dual.branches[1].psi.intercept == Rational(-1));
  CHECK(dual.branches[0].weight == ComplexRational(Rational(1) / 2));
  CHECK(dual.branches[1].weight == ComplexRational(Rational(1) / 2));
}

TEST_CASE("dualize flips the weight sign on orientation-reversing branches") {
  Branch<RationalMode> b;
  b.u = Rational(0);
  b.v = Rational(1);
  b.psi = {Rational(-1) / 2, Rational(1)};  // x -> 1 - x/2
  b.weight = ComplexRational(Rational(1) / 2);
  b.orient = -1;
  BranchSystem<RationalMode> bs{{b}};
  auto dual = dualize(bs);
  CHECK(dual.branches[0].psi.slope == Rational(-2));
  CHECK(dual.branches[0].psi.intercept == Rational(2));  // x -> 2(1 - x)
  CHECK(dual.branches[0].weight == ComplexRational(Rational(-1) / 2));
  CHECK(dual.branches[0].u == Rational(1) / 2);
  CHECK(dual.branches[0].v == Rational(1));
}

TEST_CASE("dualize is an involution") {
  std::mt19937 g(5);
  auto frac = [&](long lo, long hi) { return Rational(long(lo + g() % (hi - lo + 1))); };
  BranchSystem<RationalMode> bs;
  for (int i = 0; i < 3; ++i) {
    Branch<RationalMode> b;
    b.u = frac(0, 3) / 8;
    b.v = b.u + Rational(1) / 4 + frac(0, 2) / 8;
    b.psi = {(g() % 2 ? Rational(1) : Rational(-1)) * (frac(1, 3) / 4), frac(0, 2) / 4};
    b.weight = ComplexRational(frac(-3, 3) / 5, frac(-3, 3) / 5);
    b.orient = sign_of(b.psi.slope);
    bs.branches.push_back(b);
  }
  auto twice = dualize(dualize(bs));
  for (int i = 0; i < 3; ++i) {
    CHECK(twice.branches[i].u == bs.branches[i].u);
    CHECK(twice.branches[i].v == bs.branches[i].v);
    CHECK(twice.branches[i].psi.slope == bs.branches[i].psi.slope);
    CHECK(twice.branches[i].psi.intercept == bs.branches[i].psi.intercept);
    CHECK(twice.branches[i].weight == bs.branches[i].weight);
  }
}

TEST_CASE("hat_R on the classic systems") {
  auto bs = build_system<FloatMode>(load_fixture("doubling"));
  CHECK(hat_R(bs, HatRMethod::cycle_mean) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(hat_R(bs, HatRMethod::iterate_sup, 8) == doctest::Approx(0.5).epsilon(1e-12));

  BranchSystem<FloatMode> single;
  single.branches.push_back({0.0, 1.0, {1.0 / 3, 0.0}, {1.0 / 3, 0.0}, 1});
  CHECK(hat_R(single) == doctest::Approx(1.0 / 3).epsilon(1e-12));

  // two full branches with contraction 1/2 and 1/4: the dominant cycle is
  // the 1/2 self-loop
  BranchSystem<FloatMode> two;
  two.branches.push_back({0.0, 1.0, {0.5, 0.0}, {0.3, 0.0}, 1});
  two.branches.push_back({0.0, 1.0, {0.25, 0.5}, {0.3, 0.0}, 1});
  CHECK(hat_R(two) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("hat_R: cycle mean agrees with iterate sup on Markov systems") {
  for (const char* name : {"doubling", "tent", "markov3", "zigzag3", "asym_tent"}) {
    auto bs = build_system<FloatMode>(load_fixture(name));
    double a = hat_R(bs, HatRMethod::cycle_mean);
    double b = hat_R(bs, HatRMethod::iterate_sup, 3 * bs.size());
    CHECK(std::abs(a - b) < 1e-9);
  }
}

TEST_CASE("hat_R times the dual minimum cycle mean is 1") {
  for (const char* name : {"doubling", "tent", "markov3"}) {
    auto bs = build_system<FloatMode>(load_fixture(name));
    auto dual = dualize(bs);
    CHECK(hat_R(bs) * min_cycle_mean(dual) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("hat_R rejects empty systems") {
  BranchSystem<FloatMode> empty;
  CHECK_THROWS_AS(hat_R(empty), std::invalid_argument);
}

TEST_CASE("dual of inverse branches carries the forward action with sign") {
  // the tent's dual system is the tent itself with signed weights eps * g
  auto doc = load_fixture("tent");
  auto map = build_map<RationalMode>(doc);
  auto bs = build_system<RationalMode>(doc);
  auto dual = dualize(bs);
  for (int j = 0; j < 2; ++j) {
    CHECK(dual.branches[j].psi.slope == map.branch[j].slope);
    CHECK(dual.branches[j].psi.intercept == map.branch[j].intercept);
    // weight eps_j * g_j
    auto expected = ComplexRational(Rational(map.branch_sign(j)) / 2);
    CHECK(dual.branches[j].weight == expected);
  }
}

TEST_CASE("weight evaluation uses the half-sum at partition points") {
  auto doc = load_fixture("asym_tent");
  auto map = build_map<RationalMode>(doc);
  auto w = build_weight<RationalMode>(doc);
  PointCmp<RationalMode> cmp;
  // 1/|f'| gives 1/3 and 2/3 on the two laps; the average applies at 1/3
  CHECK(w.at_point(map, Rational(1) / 6, cmp) == ComplexRational(Rational(1) / 3));
  CHECK(w.at_point(map, Rational(1) / 3, cmp) == ComplexRational(Rational(1) / 2));
  CHECK(w.at_point(map, Rational(1) / 2, cmp) == ComplexRational(Rational(2) / 3));
}

TEST_CASE("continuity flag") {
  PointCmp<RationalMode> cmp;
  CHECK(build_map<RationalMode>(load_fixture("tent")).continuous(cmp));
  CHECK(build_map<RationalMode>(load_fixture("zigzag3")).continuous(cmp));
  CHECK(!build_map<RationalMode>(load_fixture("doubling")).continuous(cmp));
  CHECK(!build_map<RationalMode>(load_fixture("markov3")).continuous(cmp));
}

TEST_CASE("map validation rejects broken data") {
  PiecewiseAffineMap<FloatMode> map;
  map.partition = {0.0, 0.5, 0.4, 1.0};
  map.branch = {{2.0, 0.0}, {2.0, -1.0}, {2.0, -2.0}};
  PointCmp<FloatMode> cmp;
  CHECK_THROWS_AS(map.validate(cmp), std::invalid_argument);

  PiecewiseAffineMap<FloatMode> zero_slope;
  zero_slope.partition = {0.0, 1.0};
  zero_slope.branch = {{0.0, 0.5}};
  CHECK_THROWS_AS(zero_slope.validate(cmp), std::invalid_argument);

  PiecewiseAffineMap<FloatMode> escapes;
  escapes.partition = {0.0, 1.0};
  escapes.branch = {{3.0, 0.0}};  // image (0, 3) leaves [0, 1]
  CHECK_THROWS_AS(escapes.validate(cmp), std::invalid_argument);
}
