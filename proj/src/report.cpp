#include "kneadlab/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

#include "kneadlab/kneading.hpp"
#include "kneadlab/markov_sft.hpp"
#include "kneadlab/orbits.hpp"
#include "kneadlab/regdet.hpp"
#include "kneadlab/series_zeros.hpp"
#include "kneadlab/zeta_sharp.hpp"

namespace kneadlab {

using nlohmann::json;

void write_file_atomic(const std::string& path, const std::string& text) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << text;
  }
  std::filesystem::rename(tmp, path);
}

std::string format_complex_csv(double re, double im) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%.17g,%.17g", re, im);
  return buf;
}

namespace {

template <class C>
std::string series_csv(const TruncatedSeries<C>& s) {
  std::ostringstream os;
  os << "n,re,im\n";
  for (int n = 0; n <= s.order(); ++n) {
    auto v = to_cd(s[n]);
    os << n << "," << format_complex_csv(v.real(), v.imag()) << "\n";
  }
  return os.str();
}

template <class C>
json series_json(const TruncatedSeries<C>& s) {
  json arr = json::array();
  for (int n = 0; n <= s.order(); ++n) {
    auto v = to_cd(s[n]);
    arr.push_back({v.real(), v.imag()});
  }
  return arr;
}

struct Rng {
  std::mt19937 g;
  explicit Rng(uint32_t seed) : g(seed) {}
  long irange(long lo, long hi) { return lo + long(g() % uint32_t(hi - lo + 1)); }
  double unit() { return double(g()) / 4294967296.0; }
  std::complex<double> cunit() { return {2 * unit() - 1, 2 * unit() - 1}; }
};

template <class M>
typename M::real rational_like(long p, long q) {
  if constexpr (M::exact)
    return Rational(p) / Rational(q);
  else
    return double(p) / double(q);
}

template <class M>
typename M::cplx cplx_like(long pre, long pim, long q) {
  if constexpr (M::exact)
    return ComplexRational(Rational(pre) / Rational(q), Rational(pim) / Rational(q));
  else
    return {double(pre) / double(q), double(pim) / double(q)};
}

/// Random contracting branch into (0,1): slope s/16 with 1<=|s|<=7,
/// intercept placed so the image stays inside.
template <class M>
Branch<M> random_branch(Rng& rng) {
  using R = typename M::real;
  Branch<M> b;
  long s = rng.irange(1, 7) * (rng.irange(0, 1) ? 1 : -1);
  long ulo = rng.irange(0, 6), vhi = rng.irange(ulo + 4, 15);
  b.u = rational_like<M>(ulo, 16);
  b.v = rational_like<M>(vhi, 16);
  R slope = rational_like<M>(s, 16);
  // choose intercept so that psi((0,1)) subset (1/16, 15/16)
  long blo, bhi;
  if (s > 0) {
    blo = 1;
    bhi = 14 - s;
  } else {
    blo = 1 - s;
    bhi = 14;
  }
  long bi = rng.irange(blo, bhi);
  b.psi = {slope, rational_like<M>(bi, 16)};
  b.weight = cplx_like<M>(rng.irange(-8, 8), rng.irange(-8, 8), 16);
  b.orient = s > 0 ? 1 : -1;
  return b;
}

template <class M>
IdentityResult check_det_from_traces(Rng& rng) {
  IdentityResult r{"det_from_traces", "det(Id - zL) = exp(-sum z^n/n Tr L^n)", 0, 1e-9, "", ""};
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    int dim = int(rng.irange(1, 6));
    FiniteOperator L = FiniteOperator::zero(dim);
    for (auto& e : L.entries) e = rng.cunit();
    worst = std::max(worst, det_from_traces(L, 20).residual);
  }
  r.residual = worst;
  r.status = worst < r.tolerance ? "pass" : "fail";
  return r;
}

template <class M>
IdentityResult check_functional_relation(const BranchSystem<M>& bs, const PointCmp<M>& cmp,
                                         int nmax) {
  IdentityResult r{"functional_relation",
                   "sharp trace of the dual system negates the sharp trace", 0, 1e-10, "", ""};
  auto dual = dualize(bs);
  double worst = 0;
  for (int n = 1; n <= nmax; ++n) {
    auto a = sharp_trace(bs, n, cmp).orbit_form;
    auto b = sharp_trace(dual, n, cmp).orbit_form;
    worst = std::max(worst, abs_cd(a + b));
  }
  r.residual = worst;
  r.note = "n <= " + std::to_string(nmax);
  r.status = worst < r.tolerance ? "pass" : "fail";
  return r;
}

template <class M>
IdentityResult check_trace_property(Rng& rng, const PointCmp<M>& cmp) {
  IdentityResult r{"trace_property", "Tr#(M1 M2) = Tr#(M2 M1)", 0, 1e-10, "", ""};
  using R = typename M::real;
  using C = typename M::cplx;
  double worst = 0;
  for (int trial = 0; trial < 20; ++trial) {
    Branch<M> b1 = random_branch<M>(rng);
    Branch<M> b2 = random_branch<M>(rng);
    // full-interval domains keep both compositions alive
    b1.u = rational_like<M>(0, 1);
    b1.v = rational_like<M>(1, 1);
    b2.u = b1.u;
    b2.v = b1.v;
    auto compose = [&](const Branch<M>& f, const Branch<M>& g) {
      // branch of M_f M_g: psi = psi_g o psi_f ... composition of the
      // operator product acts by psi_2 o psi_1 with weight g1 * g2(psi_1 x)
      Branch<M> c;
      c.u = f.u;
      c.v = f.v;
      c.psi = {g.psi.slope * f.psi.slope, g.psi.slope * f.psi.intercept + g.psi.intercept};
      c.weight = f.weight * g.weight;
      c.orient = f.orient * g.orient;
      return c;
    };
    BranchSystem<M> m12, m21;
    m12.branches.push_back(compose(b1, b2));
    m21.branches.push_back(compose(b2, b1));
    C t12 = sharp_trace(m12, 1, cmp).orbit_form;
    C t21 = sharp_trace(m21, 1, cmp).orbit_form;
    worst = std::max(worst, abs_cd(t12 - t21));
    (void)sizeof(R);
  }
  r.residual = worst;
  r.status = worst < r.tolerance ? "pass" : "fail";
  return r;
}

template <class M>
IdentityResult check_sft_traces(const MapSpecDocument& doc, const PointCmp<M>& cmp, int nmax) {
  IdentityResult r{"sft_trace_identity", "orbit sums over Fix f^n equal Tr A_g^n", 0, 1e-10, "",
                   ""};
  if (doc.is_branch_system) {
    r.status = "na";
    r.note = "branch-system input";
    return r;
  }
  auto map = build_map<M>(doc);
  auto w = build_weight<M>(doc);
  auto cert = markov_certificate(map, cmp);
  if (!cert.is_markov) {
    r.status = "na";
    r.note = "map is not Markov";
    return r;
  }
  auto wtm = transition_matrices(map, w, cmp);
  auto sft = sft_spectral_data(wtm, nmax);
  auto zr = zeta_series(map, w, nmax, EndpointPolicy::include, cmp);
  double worst = 0;
  for (int n = 1; n <= nmax; ++n)
    worst = std::max(worst, abs_cd(zr.per_n_sums[n] - sft.traces[n]));
  r.residual = worst;
  r.note = "n <= " + std::to_string(nmax) + (M::exact ? ", exact arithmetic" : "");
  r.status = worst < r.tolerance ? "pass" : "fail";
  return r;
}

template <class M>
IdentityResult check_mt_identity(const MapSpecDocument& doc, const PointCmp<M>& cmp, int K) {
  IdentityResult r{"mt_identity", "Milnor-Thurston identity for zeta^-", 0, 1e-9, "", ""};
  if (doc.is_branch_system) {
    r.status = "na";
    r.note = "branch-system input";
    return r;
  }
  auto map = build_map<M>(doc);
  if (!map.continuous(cmp)) {
    r.status = "na";
    r.note = "map is discontinuous";
    return r;
  }
  auto rep = mt_identity_report(map, K, cmp);
  r.residual = rep.best_residual;
  r.note = "best reading: " + (rep.best >= 0 ? rep.candidates[rep.best].name : "none");
  r.status = rep.best_residual < r.tolerance ? "pass" : "fail";
  return r;
}

template <class M>
std::pair<IdentityResult, IdentityResult> check_weighted_mt(const BranchSystem<M>& bs,
                                                            const PointCmp<M>& cmp, int K) {
  IdentityResult r1{"weighted_mt_plain", "Det#(1-zM) * Det*(Id+D) = 1", 0, 1e-8, "", ""};
  IdentityResult r2{"weighted_mt_dual", "Det#(1-zM) = Det*(Id+D-hat)", 0, 1e-8, "", ""};
  auto sharp = sharp_det_series(bs, K, cmp);
  auto mu = atomic_measure(bs, cmp);
  auto plain = kneading_kernel(bs, mu, K, KernelSide::plain, cmp);
  auto dual = kneading_kernel(bs, mu, K, KernelSide::dual, cmp);
  auto det_plain = det_star_series(plain, K);
  auto det_dual = det_star_series(dual, K);
  using C = typename M::cplx;
  auto prod = sharp.det_sharp * det_plain;
  r1.residual = series_residual(prod, TruncatedSeries<C>::one(K));
  r1.status = r1.residual < r1.tolerance ? "pass" : "fail";
  r2.residual = series_residual(sharp.det_sharp, det_dual);
  r2.status = r2.residual < r2.tolerance ? "pass" : "fail";
  return {r1, r2};
}

template <class M>
IdentityResult check_spectrum(const MapSpecDocument& doc, const BranchSystem<M>& bs,
                              const PointCmp<M>& cmp, int K) {
  IdentityResult r{"spectrum_correspondence",
                   "zeros of Det#(1-zM) invert to the transfer-matrix spectrum", 0, 1e-6, "", ""};
  if (doc.is_branch_system) {
    r.status = "na";
    r.note = "branch-system input (no A_g oracle)";
    return r;
  }
  auto map = build_map<M>(doc);
  auto w = build_weight<M>(doc);
  auto cert = markov_certificate(map, cmp);
  if (!cert.is_markov) {
    r.status = "na";
    r.note = "map is not Markov";
    return r;
  }
  auto wtm = transition_matrices(map, w, cmp);
  auto sft = sft_spectral_data(wtm, K);
  double rhat = hat_R(bs, HatRMethod::cycle_mean, 12, cmp);
  double radius = rhat > 0 ? 0.999 / rhat : 1e6;
  auto est = spectrum_from_kneading(bs, K, radius, cmp);
  double worst = 0;
  int matched = 0;
  for (const auto& ev : sft.eigenvalues) {
    if (std::abs(ev) <= rhat * 1.000001 + 1e-9) continue;  // inside the essential disc
    double best = 1e300;
    for (const auto& e : est) best = std::min(best, std::abs(e.eigenvalue - ev));
    worst = std::max(worst, best);
    ++matched;
  }
  for (const auto& e : est) {
    double best = 1e300;
    for (const auto& ev : sft.eigenvalues) best = std::min(best, std::abs(e.eigenvalue - ev));
    worst = std::max(worst, best);
  }
  r.residual = worst;
  r.note = std::to_string(matched) + " eigenvalue(s) outside hat_R";
  r.status = worst < r.tolerance ? "pass" : "fail";
  return r;
}

IdentityResult check_det2(Rng& rng) {
  IdentityResult r{"det2_two_routes", "Det2(Id-A) = det((Id-A) exp(A))", 0, 1e-10, "", ""};
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    int dim = int(rng.irange(1, 6));
    FiniteOperator A = FiniteOperator::zero(dim);
    for (auto& e : A.entries) e = 0.5 * rng.cunit();
    worst = std::max(worst, det2(A).residual);
  }
  r.residual = worst;
  r.status = worst < r.tolerance ? "pass" : "fail";
  return r;
}

IdentityResult check_lidskii(Rng& rng) {
  IdentityResult r{"lidskii", "Tr A = sum lambda_j and det(Id-A) = prod(1-lambda_j)", 0, 1e-10,
                   "", ""};
  double worst = 0;
  for (int trial = 0; trial < 20; ++trial) {
    int dim = int(rng.irange(2, 8));
    FiniteOperator A = FiniteOperator::zero(dim);
    for (auto& e : A.entries) e = 0.5 * rng.cunit();
    auto ev = operator_eigenvalues(A);
    std::complex<double> tr = 0, prod = 1;
    for (auto l : ev) {
      tr += l;
      prod *= (1.0 - l);
    }
    std::complex<double> tr_direct = 0;
    for (int i = 0; i < dim; ++i) tr_direct += A.at(i, i);
    std::vector<std::complex<double>> idm(dim * dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) idm[i * dim + j] = (i == j ? 1.0 : 0.0) - A.at(i, j);
    auto det_direct = dense_det(std::move(idm), dim);
    worst = std::max({worst, std::abs(tr - tr_direct), std::abs(prod - det_direct)});
  }
  r.residual = worst;
  r.status = worst < r.tolerance ? "pass" : "fail";
  return r;
}

template <class M>
std::pair<IdentityResult, IdentityResult> check_plemelj(const BranchSystem<M>& bs,
                                                        const PointCmp<M>& cmp, int K) {
  IdentityResult r{"plemelj_smithies", "Fredholm expansion equals det(Id + M_D)", 0, 1e-9, "",
                   ""};
  IdentityResult h{"hadamard", "sampled minors obey |det| <= C0^n n^{n/2}", 0, 1e-9, "", ""};
  auto mu = atomic_measure(bs, cmp);
  if (mu.size() > 6) {
    r.status = h.status = "na";
    r.note = h.note = "more than 6 atoms; expansion cost capped";
    return {r, h};
  }
  int Kp = std::min(K, 10);
  auto dual = kneading_kernel(bs, mu, Kp, KernelSide::dual, cmp);
  auto ds = det_star_series(dual, Kp);
  auto rep = plemelj_smithies(dual, mu.size(), Kp);
  r.residual = series_residual(rep.assembled, ds);
  r.status = r.residual < r.tolerance ? "pass" : "fail";
  h.residual = std::max(0.0, rep.hadamard_worst - 1.0);
  h.note = "worst ratio " + std::to_string(rep.hadamard_worst);
  h.status = rep.hadamard_ok ? "pass" : "fail";
  return {r, h};
}

template <class M>
VerifySummary run_verify_suite_impl(const MapSpecDocument& doc, int order) {
  PointCmp<M> cmp{doc.options.tolerance};
  VerifySummary sum;
  Rng rng(0x5eed1234);

  sum.identities.push_back(check_det_from_traces<M>(rng));

  BranchSystem<M> bs = build_system<M>(doc, cmp);
  int trace_n = std::min(order, bs.size() >= 3 ? 8 : 12);
  sum.identities.push_back(check_functional_relation(bs, cmp, trace_n));
  sum.identities.push_back(check_trace_property<M>(rng, cmp));
  sum.identities.push_back(check_sft_traces<M>(doc, cmp, std::min(order, 12)));
  sum.identities.push_back(check_mt_identity<M>(doc, cmp, std::min(order, 10)));
  {
    auto [r1, r2] = check_weighted_mt(bs, cmp, std::min(order, 12));
    sum.identities.push_back(r1);
    sum.identities.push_back(r2);
  }
  sum.identities.push_back(check_spectrum<M>(doc, bs, cmp, order));
  sum.identities.push_back(check_det2(rng));
  sum.identities.push_back(check_lidskii(rng));
  {
    auto [r, h] = check_plemelj(bs, cmp, order);
    sum.identities.push_back(r);
    sum.identities.push_back(h);
  }

  for (const auto& idr : sum.identities)
    if (idr.status == "fail") sum.all_applicable_pass = false;
  return sum;
}

// ---------------------------------------------------------------------------
// command implementations
// ---------------------------------------------------------------------------

struct OutputSink {
  const MapSpecDocument& doc;
  const RunFlags& flags;
  json report;
  std::vector<std::string> files;

  OutputSink(const MapSpecDocument& d, const RunFlags& f, const std::string& command)
      : doc(d), flags(f) {
    report["schema"] = 1;
    report["command"] = command;
    report["input"] = d.name;
    report["arithmetic"] = d.options.rational ? "rational" : "float";
    std::filesystem::create_directories(flags.out_dir);
  }

  bool want_csv() const { return flags.format == "csv" || flags.format == "both"; }
  bool want_json() const { return flags.format == "json" || flags.format == "both"; }

  void csv(const std::string& suffix, const std::string& text) {
    if (!want_csv()) return;
    std::string path = flags.out_dir + "/" + doc.name + "_" + suffix + ".csv";
    write_file_atomic(path, text);
    files.push_back(path);
    report["artifacts"].push_back(path);
  }

  std::string finish(const std::string& command) {
    std::string text = report.dump(2) + "\n";
    if (want_json()) {
      std::string path = flags.out_dir + "/" + doc.name + "_" + command + ".json";
      write_file_atomic(path, text);
      files.push_back(path);
    }
    return text;
  }
};

template <class M>
int run_command_impl(const MapSpecDocument& doc, const std::string& command,
                     const RunFlags& flags, OutputSink& sink) {
  using C = typename M::cplx;
  PointCmp<M> cmp{doc.options.tolerance};
  int K = flags.order_override > 0 ? flags.order_override : doc.options.order;
  sink.report["order"] = K;

  EndpointPolicy policy;
  if (!flags.policy_override.empty()) {
    if (flags.policy_override == "exclude")
      policy = EndpointPolicy::exclude;
    else if (flags.policy_override == "include")
      policy = EndpointPolicy::include;
    else if (flags.policy_override == "error")
      policy = EndpointPolicy::error_on_flagged;
    else
      throw MapSpecError("--policy: expected exclude|include|error");
  } else if (doc.options.policy) {
    policy = *doc.options.policy;
  } else if (!doc.is_branch_system) {
    policy = default_policy(build_map<M>(doc), cmp);
  } else {
    policy = EndpointPolicy::include;
  }

  if (command == "orbits") {
    auto map = build_map<M>(doc);
    auto w = build_weight<M>(doc);
    std::ostringstream os;
    os << "period,point,word,weight_re,weight_im,orientation,derivative,lefschetz,endpoint_flag\n";
    int nmax = std::min(K, 10);
    for (int n = 1; n <= nmax; ++n) {
      for (const auto& r : fixed_points_of_iterate(map, w, n, cmp)) {
        auto wv = to_cd(r.weight_product);
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", to_double(r.point));
        os << n << "," << buf << "," << word_to_string(r.word) << ","
           << format_complex_csv(wv.real(), wv.imag()) << "," << r.orientation << ","
           << to_double(r.derivative) << "," << r.lefschetz << "," << (r.endpoint_flag ? 1 : 0)
           << "\n";
      }
    }
    sink.csv("orbits", os.str());
    sink.report["max_period"] = nmax;
    return 0;
  }

  if (command == "zeta") {
    auto map = build_map<M>(doc);
    auto w = build_weight<M>(doc);
    auto zr = zeta_series(map, w, K, policy, cmp);
    sink.csv("zeta", series_csv(zr.zeta));
    sink.report["policy"] = to_string(policy);
    sink.report["zeta"] = series_json(zr.zeta);
    json sums = json::array();
    for (int n = 1; n <= K; ++n) {
      auto v = to_cd(zr.per_n_sums[n]);
      sums.push_back({v.real(), v.imag()});
    }
    sink.report["per_n_sums"] = sums;
    sink.report["endpoint_warnings"] = zr.endpoint_warnings;
    return 0;
  }

  if (command == "neg-zeta") {
    auto map = build_map<M>(doc);
    auto nz = negative_zeta_series(map, K, cmp);
    sink.csv("neg_zeta", series_csv(nz));
    sink.report["neg_zeta"] = series_json(nz);
    return 0;
  }

  if (command == "sharp-det") {
    auto bs = build_system<M>(doc, cmp);
    auto rep = sharp_det_series(bs, K, cmp);
    sink.csv("sharp_det", series_csv(rep.det_sharp));
    sink.report["det_sharp"] = series_json(rep.det_sharp);
    json traces = json::array();
    for (int n = 1; n <= K; ++n) {
      auto v = to_cd(rep.traces[n]);
      traces.push_back({v.real(), v.imag()});
    }
    sink.report["sharp_traces"] = traces;
    sink.report["orbit_vs_atomic_residual"] = rep.orbit_vs_atomic;
    return 0;
  }

  if (command == "markov") {
    auto map = build_map<M>(doc);
    auto w = build_weight<M>(doc);
    auto cert = markov_certificate(map, cmp);
    sink.report["is_markov"] = cert.is_markov;
    json viol = json::array();
    for (auto [j, l] : cert.violations) viol.push_back({j, l});
    sink.report["violations"] = viol;
    if (!cert.is_markov) return 3;
    auto wtm = transition_matrices(map, w, cmp);
    json A = json::array(), Ag = json::array();
    for (int i = 0; i < wtm.dim; ++i) {
      json arow = json::array(), grow = json::array();
      for (int j = 0; j < wtm.dim; ++j) {
        arow.push_back(wtm.a(i, j));
        auto v = to_cd(wtm.ag(i, j));
        grow.push_back({v.real(), v.imag()});
      }
      A.push_back(arow);
      Ag.push_back(grow);
    }
    sink.report["A"] = A;
    sink.report["A_g"] = Ag;
    auto sft = sft_spectral_data(wtm, K);
    sink.csv("sft_det", series_csv(sft.det_poly));
    sink.report["det_poly"] = series_json(sft.det_poly);
    json eig = json::array();
    for (auto e : sft.eigenvalues) eig.push_back({e.real(), e.imag()});
    sink.report["eigenvalues"] = eig;
    json bad = json::array();
    for (const auto& b : bad_orbit_report(map, w, std::min(K, 12), cmp)) {
      auto l = to_cd(b.lambda);
      bad.push_back({{"partition_index", b.partition_index},
                     {"period", b.period},
                     {"lambda", {l.real(), l.imag()}},
                     {"case", to_string(b.kind)},
                     {"factor", b.factor}});
    }
    sink.report["bad_orbits"] = bad;
    return 0;
  }

  if (command == "kneading-mt") {
    auto map = build_map<M>(doc);
    auto rep = mt_identity_report(map, std::min(K, 16), cmp);
    sink.csv("neg_zeta", series_csv(rep.lhs));
    json cands = json::array();
    for (const auto& c : rep.candidates)
      cands.push_back({{"reading", c.name}, {"residual", c.residual}});
    sink.report["lhs_neg_zeta"] = series_json(rep.lhs);
    sink.report["candidates"] = cands;
    sink.report["best"] = rep.best >= 0 ? rep.candidates[rep.best].name : "none";
    sink.report["best_residual"] = rep.best_residual;
    return 0;
  }

  if (command == "kneading-weighted") {
    auto bs = build_system<M>(doc, cmp);
    auto mu = atomic_measure(bs, cmp);
    json atoms = json::array();
    for (int i = 0; i < mu.size(); ++i)
      atoms.push_back({{"x", to_double(mu.locations[i])},
                       {"mass", to_double(mu.masses[i])},
                       {"from", mu.provenance[i]}});
    sink.report["atoms"] = atoms;
    auto plain = kneading_kernel(bs, mu, K, KernelSide::plain, cmp);
    auto dual = kneading_kernel(bs, mu, K, KernelSide::dual, cmp);
    sink.report["hs_per_coeff_plain"] = plain.hs_per_coeff;
    sink.report["hs_per_coeff_dual"] = dual.hs_per_coeff;
    auto dsp = det_star_series(plain, K);
    auto dsd = det_star_series(dual, K);
    sink.csv("det_star_plain", series_csv(dsp));
    sink.csv("det_star_dual", series_csv(dsd));
    sink.report["det_star_plain"] = series_json(dsp);
    sink.report["det_star_dual"] = series_json(dsd);
    return 0;
  }

  if (command == "spectrum") {
    auto bs = build_system<M>(doc, cmp);
    double rhat = hat_R(bs, HatRMethod::cycle_mean, 12, cmp);
    double radius = flags.radius_override > 0
                        ? flags.radius_override
                        : (doc.options.radius > 0 ? doc.options.radius
                                                  : (rhat > 0 ? 0.999 / rhat : 10.0));
    auto est = spectrum_from_kneading(bs, K, radius, cmp);
    sink.report["hat_R"] = rhat;
    sink.report["radius"] = radius;
    json eig = json::array();
    for (const auto& e : est)
      eig.push_back({{"eigenvalue", {e.eigenvalue.real(), e.eigenvalue.imag()}},
                     {"multiplicity", e.multiplicity}});
    sink.report["spectrum"] = eig;
    return 0;
  }

  if (command == "verify") {
    auto sum = run_verify_suite_impl<M>(doc, K);
    json ids = json::array();
    for (const auto& idr : sum.identities)
      ids.push_back({{"id", idr.id},
                     {"anchor", idr.anchor},
                     {"residual", idr.residual},
                     {"tolerance", idr.tolerance},
                     {"status", idr.status},
                     {"note", idr.note}});
    sink.report["identities"] = ids;
    sink.report["all_applicable_pass"] = sum.all_applicable_pass;
    (void)sizeof(C);
    return sum.all_applicable_pass ? 0 : 1;
  }

  throw MapSpecError("unknown command: " + command);
}

}  // namespace

VerifySummary run_verify_suite(const MapSpecDocument& doc, int order) {
  if (doc.options.rational) return run_verify_suite_impl<RationalMode>(doc, order);
  return run_verify_suite_impl<FloatMode>(doc, order);
}

CommandOutcome run_command(const MapSpecDocument& doc, const std::string& command,
                           const RunFlags& flags) {
  CommandOutcome out;
  OutputSink sink(doc, flags, command);
  try {
    if (doc.options.rational)
      out.exit_code = run_command_impl<RationalMode>(doc, command, flags, sink);
    else
      out.exit_code = run_command_impl<FloatMode>(doc, command, flags, sink);
  } catch (const MapSpecError& e) {
    sink.report["error"] = e.what();
    out.exit_code = 2;
  } catch (const std::invalid_argument& e) {
    sink.report["error"] = e.what();
    sink.report["status"] = "precondition unmet";
    out.exit_code = 3;
  } catch (const std::domain_error& e) {
    sink.report["error"] = e.what();
    sink.report["status"] = "precondition unmet";
    out.exit_code = 3;
  }
  out.report_text = sink.finish(command);
  out.files_written = sink.files;
  return out;
}

}  // namespace kneadlab
