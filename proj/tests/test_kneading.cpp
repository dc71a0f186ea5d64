#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "kneadlab/kneading.hpp"
#include "kneadlab/markov_sft.hpp"
#include "test_util.hpp"

using namespace kneadlab;
using CQ = ComplexRational;

namespace {

const char* kCanonicalReading = "1-z(e0+eN)/2 / (1-z)det(D)";

TruncatedSeries<CQ> exact_one(int K) { return TruncatedSeries<CQ>::one(K); }

bool series_equal(const TruncatedSeries<CQ>& a, const TruncatedSeries<CQ>& b) {
  for (int n = 0; n <= std::min(a.order(), b.order()); ++n)
    if (!(a[n] == b[n])) return false;
  return true;
}

}  // namespace

TEST_CASE("tent kneading matrix is (1-2z)/(1-z)") {
  auto map = build_map<RationalMode>(load_fixture("tent"));
  auto km = kneading_matrix(map, 10, PointCmp<RationalMode>{});
  REQUIRE(km.matrix.dim() == 1);
  CHECK(km.eps_a0 == 1);
  CHECK(km.eps_aN == -1);
  const auto& e = km.matrix.at(0, 0);
  // (1 - 2z)/(1 - z) = 1 - z - z^2 - z^3 - ...
  CHECK(e[0] == CQ(Rational(1)));
  for (int n = 1; n <= 10; ++n) CHECK(e[n] == CQ(Rational(-1)));
}

TEST_CASE("kneading matrices are the identity at z = 0") {
  for (const char* name : {"tent", "asym_tent", "zigzag3", "f0_belowdiag"}) {
    auto map = build_map<RationalMode>(load_fixture(name));
    auto km = kneading_matrix(map, 6, PointCmp<RationalMode>{});
    for (int i = 0; i < km.matrix.dim(); ++i)
      for (int j = 0; j < km.matrix.dim(); ++j)
        CHECK(km.matrix.at(i, j)[0] == (i == j ? CQ(Rational(1)) : CQ()));
  }
}

TEST_CASE("kneading matrix rejects discontinuous maps") {
  auto map = build_map<RationalMode>(load_fixture("doubling"));
  CHECK_THROWS_AS(kneading_matrix(map, 6, PointCmp<RationalMode>{}), std::invalid_argument);
}

TEST_CASE("Milnor-Thurston identity: tent") {
  auto map = build_map<RationalMode>(load_fixture("tent"));
  auto rep = mt_identity_report(map, 10, PointCmp<RationalMode>{});
  REQUIRE(rep.best >= 0);
  CHECK(rep.candidates[rep.best].name == kCanonicalReading);
  CHECK(rep.best_residual == 0.0);
  // lhs = 1/(1 - 2z)
  Rational p(1);
  for (int n = 0; n <= 10; ++n) {
    CHECK(rep.lhs[n] == CQ(p));
    p *= 2;
  }
}

TEST_CASE("Milnor-Thurston identity: trivial below-diagonal map") {
  auto map = build_map<RationalMode>(load_fixture("f0_belowdiag"));
  auto rep = mt_identity_report(map, 10, PointCmp<RationalMode>{});
  REQUIRE(rep.best >= 0);
  CHECK(series_equal(rep.lhs, exact_one(10)));
  CHECK(rep.candidates[rep.best].residual == 0.0);
  CHECK(rep.candidates[rep.best].name == kCanonicalReading);
}

TEST_CASE("Milnor-Thurston identity: further continuous fixtures, same reading") {
  for (const char* name : {"asym_tent", "zigzag3"}) {
    auto map = build_map<RationalMode>(load_fixture(name));
    auto rep = mt_identity_report(map, 10, PointCmp<RationalMode>{});
    REQUIRE(rep.best >= 0);
    CHECK(rep.best_residual == 0.0);
    CHECK(rep.candidates[rep.best].name == kCanonicalReading);
  }
}

TEST_CASE("Milnor-Thurston identity holds beyond the Markov setting") {
  // continuous, expanding, and not Markov: peak value 3/4 inside a cell
  PiecewiseAffineMap<RationalMode> map;
  map.partition = {Rational(0), Rational(1) / 2, Rational(1)};
  map.branch = {{Rational(3) / 2, Rational(0)},
                {Rational(-3) / 2, Rational(3) / 2}};
  PointCmp<RationalMode> cmp;
  CHECK(!markov_certificate(map, cmp).is_markov);
  auto rep = mt_identity_report(map, 10, cmp);
  REQUIRE(rep.best >= 0);
  CHECK(rep.best_residual == 0.0);
  CHECK(rep.candidates[rep.best].name == kCanonicalReading);
}

TEST_CASE("atomic measure of the doubling system") {
  auto bs = build_system<RationalMode>(load_fixture("doubling"));
  auto mu = atomic_measure(bs, PointCmp<RationalMode>{});
  REQUIRE(mu.size() == 3);
  CHECK(mu.locations[0] == Rational(0));
  CHECK(mu.locations[1] == Rational(1) / 2);
  CHECK(mu.locations[2] == Rational(1));
  CHECK(mu.masses[0] == Rational(3) / 2);
  CHECK(mu.masses[1] == Rational(1));
  CHECK(mu.masses[2] == Rational(3) / 2);
}

TEST_CASE("zero-weight branches contribute nothing to the measure") {
  BranchSystem<RationalMode> bs;
  Branch<RationalMode> b;
  b.u = Rational(0);
  b.v = Rational(1);
  b.psi = {Rational(1) / 2, Rational(0)};
  b.weight = CQ();
  b.orient = 1;
  bs.branches.push_back(b);
  auto mu = atomic_measure(bs, PointCmp<RationalMode>{});
  CHECK(mu.size() == 0);
}

TEST_CASE("kernel star determinants close the doubling identities") {
  auto bs = build_system<RationalMode>(load_fixture("doubling"));
  PointCmp<RationalMode> cmp;
  const int K = 12;
  auto mu = atomic_measure(bs, cmp);
  auto plain = kneading_kernel(bs, mu, K, KernelSide::plain, cmp);
  auto dual = kneading_kernel(bs, mu, K, KernelSide::dual, cmp);

  auto ds_dual = det_star_series(dual, K);
  CHECK(ds_dual[0] == CQ(Rational(1)));
  CHECK(ds_dual[1] == CQ(Rational(-1)));
  for (int n = 2; n <= K; ++n) CHECK(ds_dual[n] == CQ());

  auto ds_plain = det_star_series(plain, K);
  for (int n = 0; n <= K; ++n) CHECK(ds_plain[n] == CQ(Rational(1)));  // 1/(1-z)

  for (double h : plain.hs_per_coeff) CHECK(std::isfinite(h));
}

TEST_CASE("kernel star determinants: single contracting branch") {
  BranchSystem<RationalMode> bs;
  Branch<RationalMode> b;
  b.u = Rational(0);
  b.v = Rational(1);
  b.psi = {Rational(1) / 2, Rational(0)};
  b.weight = CQ(Rational(1));
  b.orient = 1;
  bs.branches.push_back(b);
  PointCmp<RationalMode> cmp;
  const int K = 10;
  auto mu = atomic_measure(bs, cmp);
  REQUIRE(mu.size() == 3);  // 0, 1/2, 1

  auto plain = kneading_kernel(bs, mu, K, KernelSide::plain, cmp);
  auto dual = kneading_kernel(bs, mu, K, KernelSide::dual, cmp);

  // z^1 diagonal trace against the measure equals the first sharp trace
  CQ z1_trace;
  for (int i = 0; i < mu.size(); ++i)
    z1_trace += plain.entries.at(i, i)[1] * CQ(mu.masses[i]);
  CHECK(z1_trace == CQ(Rational(1)));

  auto ds_plain = det_star_series(plain, K);
  for (int n = 0; n <= K; ++n) CHECK(ds_plain[n] == CQ(Rational(1)));
  auto ds_dual = det_star_series(dual, K);
  CHECK(ds_dual[0] == CQ(Rational(1)));
  CHECK(ds_dual[1] == CQ(Rational(-1)));
  for (int n = 2; n <= K; ++n) CHECK(ds_dual[n] == CQ());
}

TEST_CASE("weighted Milnor-Thurston identity across the fixture family") {
  for (const char* name : {"doubling", "tent", "markov3", "tri_spectrum"}) {
    CAPTURE(name);
    auto bs = build_system<RationalMode>(load_fixture(name));
    PointCmp<RationalMode> cmp;
    const int K = 12;
    auto sharp = sharp_det_series(bs, K, cmp).det_sharp;
    auto mu = atomic_measure(bs, cmp);
    auto plain = kneading_kernel(bs, mu, K, KernelSide::plain, cmp);
    auto dual = kneading_kernel(bs, mu, K, KernelSide::dual, cmp);
    auto prod = sharp * det_star_series(plain, K);
    CHECK(series_equal(prod, exact_one(K)));
    CHECK(series_equal(sharp, det_star_series(dual, K)));
  }
}

TEST_CASE("zero weights give a zero kernel") {
  BranchSystem<RationalMode> bs;
  Branch<RationalMode> b;
  b.u = Rational(0);
  b.v = Rational(1);
  b.psi = {Rational(1) / 2, Rational(1) / 4};
  b.weight = CQ(Rational(1));
  b.orient = 1;
  bs.branches.push_back(b);
  Branch<RationalMode> zero = b;
  zero.psi = {Rational(1) / 3, Rational(1) / 8};
  zero.weight = CQ();
  bs.branches.push_back(zero);
  PointCmp<RationalMode> cmp;
  auto mu = atomic_measure(bs, cmp);
  auto km = kneading_kernel(bs, mu, 6, KernelSide::plain, cmp);
  // entries involve only the weighted branch; the zero one is invisible
  auto ds = det_star_series(km, 6);
  BranchSystem<RationalMode> solo;
  solo.branches.push_back(b);
  auto mu2 = atomic_measure(solo, cmp);
  auto km2 = kneading_kernel(solo, mu2, 6, KernelSide::plain, cmp);
  auto ds2 = det_star_series(km2, 6);
  CHECK(series_equal(ds, ds2));
}

TEST_CASE("spectrum from the sharp determinant: doubling") {
  auto bs = build_system<FloatMode>(load_fixture("doubling"));
  auto est = spectrum_from_kneading(bs, 20, 1.5, PointCmp<FloatMode>{});
  REQUIRE(est.size() == 1);
  CHECK(std::abs(est[0].eigenvalue - 1.0) < 1e-9);
  CHECK(est[0].multiplicity == 1);
}

TEST_CASE("spectrum from the sharp determinant: constructed two-branch system") {
  auto bs = build_system<FloatMode>(load_fixture("tri_spectrum"));
  CHECK(hat_R(bs) == doctest::Approx(0.25).epsilon(1e-12));
  auto est = spectrum_from_kneading(bs, 20, 3.5, PointCmp<FloatMode>{});
  REQUIRE(est.size() == 2);
  CHECK(std::abs(est[0].eigenvalue - 0.9) < 1e-6);
  CHECK(std::abs(est[1].eigenvalue - 0.3) < 1e-6);
  CHECK_THROWS_AS(spectrum_from_kneading(bs, 20, 10.0, PointCmp<FloatMode>{}),
                  std::invalid_argument);
}

TEST_CASE("empty branch system has no spectrum estimates") {
  BranchSystem<FloatMode> bs;
  Branch<FloatMode> b;
  b.u = 0.0;
  b.v = 0.25;
  b.psi = {0.25, 0.5};  // image (0.5, 0.5625) misses the domain
  b.weight = {1.0, 0.0};
  b.orient = 1;
  bs.branches.push_back(b);
  auto est = spectrum_from_kneading(bs, 12, 2.0, PointCmp<FloatMode>{});
  CHECK(est.empty());
}
