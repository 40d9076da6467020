// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance <path to paper-suite.json>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <gmp.h>
#include <quadmath.h>
#include <mpfr.h>

#include "ergolab/averaging.hpp"
#include "ergolab/growth.hpp"
#include "ergolab/index_set.hpp"
#include "ergolab/sequence.hpp"
#include "ergolab/weights.hpp"
#include "report.hpp"

using namespace ergolab;
using report::Json;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

void fail(Outcome& o, const std::string& why) {
  if (o.pass) o.detail = why;
  o.pass = false;
}

int g_failed = 0;

void run(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > limit_s) fail(o, "runtime " + std::to_string(secs) + " s over the " + std::to_string(limit_s) + " s limit");
  if (!o.pass) ++g_failed;
  std::printf("[%s] criterion %2d: %s (%.1f s) %s\n", o.pass ? "PASS" : "FAIL", id, title, secs, o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// --- independent oracles ---------------------------------------------------

std::int64_t isqrt(std::int64_t v) {
  std::int64_t r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

// Correctly rounded num / den for integer num and positive den.
double round_ratio(__int128 num, __int128 den) {
  auto to_mpz = [](mpz_t z, __int128 v) {
    const bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
    mpz_set_ui(z, static_cast<unsigned long>(u >> 64));
    mpz_mul_2exp(z, z, 64);
    mpz_add_ui(z, z, static_cast<unsigned long>(u & 0xffffffffffffffffULL));
    if (neg) mpz_neg(z, z);
  };
  mpq_t q;
  mpq_init(q);
  to_mpz(mpq_numref(q), num);
  to_mpz(mpq_denref(q), den);
  mpq_canonicalize(q);
  mpfr_t r;
  mpfr_init2(r, 53);
  mpfr_set_q(r, q, MPFR_RNDN);
  const double d = mpfr_get_d(r, MPFR_RNDN);
  mpfr_clear(r);
  mpq_clear(q);
  return d;
}

// Shift-model squared norm at each checkpoint by the O(N^2) double sum over
// pairs (n, m), with integer-scaled coefficients.
std::vector<double> brute_norm2(const std::vector<std::int64_t>& a, const std::vector<std::uint8_t>& in_A,
                                const std::vector<Rational>& x, const std::vector<std::int64_t>& cps) {
  std::int64_t L = 1;
  for (const auto& r : x) L = std::lcm(L, r.den());
  std::vector<__int128> c;
  for (const auto& r : x) c.push_back(static_cast<__int128>(r.num()) * (L / r.den()));
  const std::int64_t w = static_cast<std::int64_t>(c.size());
  std::vector<__int128> G(2 * w + 1, 0);  // G[d + w] = sum_i c_i c_{i+d}
  for (std::int64_t d = -w; d <= w; ++d)
    for (std::int64_t i = 0; i < w; ++i)
      if (i + d >= 0 && i + d < w) G[d + w] += c[i] * c[i + d];
  std::vector<double> out;
  __int128 S = 0;
  std::int64_t count = 0;
  std::size_t next = 0;
  for (std::int64_t n = 0; n < cps.back(); ++n) {
    if (in_A[n]) {
      ++count;
      for (std::int64_t m = 0; m <= n; ++m) {
        if (!in_A[m]) continue;
        const std::int64_t d = a[n] - a[m];
        if (d > -w && d < w) S += (m == n ? 1 : 2) * G[d + w];
      }
    }
    if (n + 1 == cps[next]) {
      out.push_back(count ? round_ratio(S, static_cast<__int128>(L) * L * count * count) : 0.0);
      ++next;
    }
  }
  return out;
}

std::complex<double> e_ld(long double x) {
  x -= std::floor(x);
  const long double a = 2 * 3.14159265358979323846264338327950288L * x;
  return {static_cast<double>(std::cos(a)), static_cast<double>(std::sin(a))};
}

Json load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return Json::parse(in);
}

Json subset(const Json& suite, const std::function<bool(const std::string&)>& keep) {
  Json out = suite;
  out["experiments"] = Json::array();
  for (const auto& e : suite["experiments"])
    if (keep(e.value("id", std::string()))) out["experiments"].push_back(e);
  return out;
}

struct GateTally {
  std::int64_t checked = 0, hypothesis = 0;
  std::vector<std::string> violations;
  void add(const Json& battery) {
    const Json& g = battery["van_der_corput_gate"];
    checked += g["instances_checked"].get<std::int64_t>();
    hypothesis += g["hypothesis_met"].get<std::int64_t>();
    for (const auto& v : g["violations"]) violations.push_back(v.get<std::string>());
  }
};

// Criteria 5 and 6 share this check on a battery result.
Outcome grid_outcome(const Json& battery, std::size_t expected_count, double tol) {
  Outcome o;
  std::size_t n = 0;
  double worst = 0;
  std::string worst_id;
  for (const auto& e : battery["experiments"]) {
    ++n;
    const std::string id = e["id"];
    if (e.contains("error")) {
      fail(o, id + ": " + e["error"].get<std::string>());
      continue;
    }
    const double norm2 = e["final"]["norm2"].get<double>();
    if (norm2 > worst) worst = norm2, worst_id = id;
    if (e["verdict"] != "converges-to-0") fail(o, id + " verdict " + e["verdict"].get<std::string>());
    if (!(norm2 < tol)) fail(o, id + " final norm2 " + fmt("%.3g", norm2));
    if (e["final"]["N"].get<std::int64_t>() != 1000000) fail(o, id + " horizon is not 1e6");
  }
  if (n != expected_count) fail(o, "expected " + std::to_string(expected_count) + " configs, got " + std::to_string(n));
  if (o.pass)
    o.detail = std::to_string(n) + " configs converge-to-0; max final norm2 " + fmt("%.3g", worst) + " (" + worst_id +
               "), max final norm " + fmt("%.3g", std::sqrt(worst));
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <paper-suite.json>\n");
    return 2;
  }
  const Json suite = load(argv[1]);
  GateTally gate;

  run(1, "classification grid", 10, [] {
    struct Row {
      const char* f;
      const char* expect;  // Pm label, or Unclassified
      int l;               // M_l index, -1: not in any M_l
    } rows[] = {
        {"t", "Pm(1)", -1},
        {"t^2+t", "Pm(2)", -1},
        {"t^3-t+1", "Pm(3)", -1},
        {"t^(1/2)", "Pm(1)", 0},
        {"t^(3/2)", "Pm(2)", 1},
        {"t^(5/2)", "Pm(3)", 2},
        {"t^(3/2)*ln(t)", "Pm(2)", 1},
        {"t^(3/2)/ln(t)", "Pm(2)", 1},
        {"2*t^(5/2)+sqrt3*t^2-t^(1/2)", "Pm(3)", 2},
        {"t*ln(t)", "Unclassified", -1},
        {"t^2*ln(t)", "Unclassified", -1},
        {"ln(t)", "Unclassified", -1},
    };
    Outcome o;
    for (const auto& r : rows) {
      const HardyExpr f = HardyExpr::parse(r.f);
      const GrowthClass pm = classify_Pm(f);
      const std::string label =
          pm.verdict == GrowthVerdict::Pm ? "Pm(" + std::to_string(pm.index) + ")" : "Unclassified";
      if (label != r.expect) fail(o, std::string(r.f) + " -> " + label);
      const GrowthClass ml = classify_Ml(f);
      const bool in_ml = ml.verdict == GrowthVerdict::Ml;
      if (in_ml != (r.l >= 0) || (in_ml && ml.index != r.l)) fail(o, std::string(r.f) + " M_l mismatch");
    }
    if (o.pass) o.detail = "12/12 match; t ln t, t^2 ln t, ln t rejected";
    return o;
  });

  run(2, "b_k oracle and gap statistic", 30, [] {
    Outcome o;
    // P_1 members of the corpus: t and t^(1/2). Brute force scans n upward.
    const auto lin = build_bk(HardyExpr::parse("t"), 200);
    const auto root = build_bk(HardyExpr::parse("t^(1/2)"), 200);
    for (std::int64_t k = 1; k <= 200; ++k) {
      std::int64_t n = 1;
      while (n < k) ++n;
      if (lin.b[k - 1] != n) fail(o, "b_k mismatch for t at k=" + std::to_string(k));
      n = 1;
      while (isqrt(n) < k) ++n;
      if (root.b[k - 1] != n) fail(o, "b_k mismatch for t^(1/2) at k=" + std::to_string(k));
    }
    const std::int64_t K = 10000;
    const auto big = build_bk(HardyExpr::parse("t^(1/2)"), K + 1);
    for (std::int64_t k = 1; k <= K + 1; ++k)
      if (big.b[k - 1] != k * k) fail(o, "b_k != k^2 at k=" + std::to_string(k));
    // running max of k d_k / b_k from k = 100; growth per doubling
    std::vector<double> runmax(K + 1, 0);
    double m = 0;
    for (std::int64_t k = 100; k <= K; ++k) {
      const double stat = static_cast<double>(k) * (big.b[k] - big.b[k - 1]) / big.b[k - 1];
      m = std::max(m, stat);
      runmax[k] = m;
    }
    double worst = 0;
    for (std::int64_t k = 100; 2 * k <= K; ++k) worst = std::max(worst, runmax[2 * k] / runmax[k] - 1);
    if (worst > 0.01) fail(o, "running max grew " + fmt("%.4f", worst) + " per doubling");
    if (o.pass) o.detail = "K=200 exact for t, t^(1/2); max growth per doubling " + fmt("%.2e", worst);
    return o;
  });

  run(3, "exact orthogonality 1/N", 60, [] {
    Outcome o;
    std::int64_t checked = 0;
    for (const char* f : {"t^(3/2)", "t^2+t", "t^(5/2)*ln(t)"}) {
      ExperimentConfig c;
      c.seq.f = HardyExpr::parse(f);
      c.N = 1000000;
      c.dedup = std::string(f) == "t^2+t";
      c.validate();
      const auto tr = vector_average(c);
      if (!tr.exact) fail(o, std::string(f) + ": exact path not taken");
      for (const auto& p : tr.points) {
        ++checked;
        if (p.norm2 != 1.0 / static_cast<double>(p.N))
          fail(o, std::string(f) + " at N=" + std::to_string(p.N) + ": " + fmt("%.17g", p.norm2));
      }
    }
    if (o.pass) o.detail = std::to_string(checked) + " checkpoints bit-identical to 1/N";
    return o;
  });

  run(4, "bucketed gram equals the brute-force double sum", 120, [] {
    Outcome o;
    std::mt19937_64 rng(20240607);
    const char* fs[] = {"t^(3/2)", "t^(1/2)", "t^2+t", "t^(5/2)*ln(t)", "t^(3/2)/ln(t)", "2*t^(5/2)+sqrt3*t^2-t^(1/2)"};
    const char* hs[] = {"zero", "period:1,-1", "rand:r=2,seed=5", "const:3"};
    const char* As[] = {"nat", "ap:1,3", "rot:alpha=sqrt2-1,lo=0,hi=1/3", "bern:p=0.4,seed=9"};
    std::size_t points = 0;
    for (int trial = 0; trial < 20; ++trial) {
      ExperimentConfig c;
      c.seq.f = HardyExpr::parse(fs[rng() % 6]);
      c.seq.h = Perturbation::parse(hs[rng() % 4]);
      c.A = IndexSet::parse(As[rng() % 4]);
      const std::int64_t width = 1 + static_cast<std::int64_t>(rng() % 5);
      std::vector<Rational> x;
      for (std::int64_t i = 0; i < width; ++i)
        x.push_back(Rational::of(static_cast<std::int64_t>(rng() % 13) - 6, 1 + static_cast<std::int64_t>(rng() % 6)));
      if (std::all_of(x.begin(), x.end(), [](const Rational& r) { return r.is_zero(); })) x[0] = Rational(1);
      c.x = VectorModel::from_coords(static_cast<std::int64_t>(rng() % 7) - 3, x);
      c.N = 2000;
      c.validate();
      const auto seq = generate_a(c.seq, c.N);
      const auto tr = vector_average(c, seq);
      const auto brute = brute_norm2(seq.a, c.A.indicator(c.N), x, c.checkpoints);
      const std::string tag = "trial " + std::to_string(trial) + " (" + c.seq.f.str() + ", " + c.seq.h.str() + ", " +
                              c.A.str() + ", " + c.x.str() + ")";
      if (!tr.exact) fail(o, tag + ": exact path not taken");
      for (std::size_t i = 0; i < tr.points.size(); ++i, ++points)
        if (tr.points[i].norm2 != brute[i])
          fail(o, tag + " at N=" + std::to_string(tr.points[i].N) + ": " + fmt("%.17g", tr.points[i].norm2) + " vs " +
                      fmt("%.17g", brute[i]));
    }
    if (o.pass) o.detail = "20 configs, " + std::to_string(points) + " checkpoints identical";
    return o;
  });

  report::Settings s;
  s.jobs = 1;

  run(5, "unweighted grid, shift model, N=1e6", 600, [&] {
    const Json r = report::battery(subset(suite, [](const std::string& id) { return id == "unweighted"; }), s).json;
    gate.add(r);
    return grid_outcome(r, 24, 0.02);
  });

  run(6, "weighted grid and scalar rotation instance", 600, [&] {
    const Json r = report::battery(subset(suite, [](const std::string& id) { return id == "weighted"; }), s).json;
    gate.add(r);
    Outcome o = grid_outcome(r, 24, 0.02);
    // N^-1 sum e(sqrt2 n^2) e(sqrt3 [n^(3/2) + n]) at N and 4N.
    const std::int64_t N = 1000000;
    const auto seq = generate_a({HardyExpr::parse("t^(3/2)+t"), Perturbation(), {}}, 4 * N);
    const auto tr = scalar_weighted_average(WeightSpec::parse("sqrt2*t^2"), seq.a, HardyExpr::parse("sqrt3"), 4 * N,
                                            {N, 4 * N});
    std::complex<double> sum = 0, at_N = 0;
    const __float128 r2 = sqrtq(2.0Q), r3 = sqrtq(3.0Q);
    for (std::int64_t n = 1; n <= 4 * N; ++n) {
      __float128 ph = r2 * static_cast<__float128>(n * n) + r3 * static_cast<__float128>(seq.a[n - 1]);
      ph -= floorq(ph);
      sum += e_ld(static_cast<long double>(ph));
      if (n == N) at_N = sum / static_cast<double>(N);
    }
    const std::complex<double> at_4N = sum / static_cast<double>(4 * N);
    const double vN = std::abs(tr.values[0]), v4N = std::abs(tr.values[1]);
    if (std::abs(tr.values[0] - at_N) > 1e-6 || std::abs(tr.values[1] - at_4N) > 1e-6)
      fail(o, "scalar sum disagrees with direct summation");
    if (!(vN < 0.02)) fail(o, "scalar |avg| at 1e6 = " + fmt("%.3g", vN));
    if (!(v4N < vN)) fail(o, "scalar tail not decreasing: " + fmt("%.3g", vN) + " -> " + fmt("%.3g", v4N));
    if (o.pass) o.detail += "; scalar |avg| " + fmt("%.2e", vN) + " at 1e6, " + fmt("%.2e", v4N) + " at 4e6";
    return o;
  });

  run(7, "property (Q) verdicts", 300, [] {
    Outcome o;
    const auto root = q_test(WeightSpec::parse("t^(1/2)"));
    if (root.overall != QOverall::Holds || root.route != QRoute::MlMembership) fail(o, "t^(1/2)");
    const auto tlog = q_test(WeightSpec::parse("t*ln(t)"));
    double osc = 0;
    if (tlog.witness_trace) osc = tlog.witness_trace->summary.oscillation;
    if (tlog.overall != QOverall::Fails || !tlog.witness || *tlog.witness != std::vector<long long>{-1, 1} || osc < 0.1)
      fail(o, "t ln t");
    if (q_test(WeightSpec::parse("t^2+ln(t)^2")).overall != QOverall::Holds) fail(o, "t^2 + ln^2 t");
    if (q_test(WeightSpec::parse("t/2")).route != QRoute::DegeneratePeriodic) fail(o, "t/2");
    if (o.pass) o.detail = "t ln t witness (-1,1) oscillation " + fmt("%.3f", osc);
    return o;
  });

  run(8, "equidistribution trichotomy with Weyl evidence at N=1e6", 300, [] {
    Outcome o;
    BoshOptions opt;
    opt.N = 1000000;
    opt.tol = {0.02, 0.1};
    struct Row {
      const char* g;
      BoshVerdict v;
      bool weyl_pass;
    } rows[] = {{"t^(3/2)", BoshVerdict::Equidistributed, true},
                {"ln(t)", BoshVerdict::Diverges, false},
                {"t/2", BoshVerdict::CesaroDegenerate, false},
                {"t^2+ln(t)", BoshVerdict::Diverges, false}};
    std::string notes;
    for (const auto& r : rows) {
      const auto b = boshernitzan_trichotomy(HardyExpr::parse(r.g), opt);
      if (b.verdict != r.v) fail(o, std::string(r.g) + " -> " + bosh_verdict_name(b.verdict));
      const auto w = weyl_test(WeightSpec::parse(r.g), opt.N, 5, {}, opt.tol);
      if (w.pass != r.weyl_pass) fail(o, std::string(r.g) + " Weyl " + (w.pass ? "pass" : "fail"));
      const auto& m1 = w.traces[0].summary;
      if (r.v == BoshVerdict::Diverges && m1.verdict != Verdict::Diverges)
        fail(o, std::string(r.g) + ": first Weyl sum does not diverge");
      if (r.v == BoshVerdict::CesaroDegenerate && m1.verdict == Verdict::Diverges)
        fail(o, std::string(r.g) + ": Cesaro mean of e(g(n)) diverges");
      notes += std::string(" ") + r.g + ":" + verdict_name(m1.verdict);
    }
    if (o.pass) o.detail = "first Weyl sums" + notes;
    return o;
  });

  run(9, "rotation return-time sets", 180, [] {
    Outcome o;
    struct Row {
      const char* spec;
      double length;
    } rows[] = {{"rot:alpha=sqrt2-1,lo=0,hi=1/3", 1.0 / 3},
                {"rot:alpha=sqrt3-1,lo=1/4,hi=3/4", 0.5},
                {"rot:alpha=(sqrt5-1)/2,lo=1/10,hi=1/5", 0.1}};
    double worst = 0;
    for (const auto& r : rows) {
      const IndexSet A = IndexSet::parse(r.spec);
      const auto w = regularity_report(A, 4, 1000000);
      const double dev = std::fabs(w.set_density.value - r.length);
      worst = std::max(worst, dev);
      if (dev > 0.01) fail(o, std::string(r.spec) + " density " + fmt("%.5f", w.set_density.value));
      if (w.verdict != Regularity::Regular || w.oscillating != 0)
        fail(o, std::string(r.spec) + ": " + regularity_name(w.verdict));
    }
    if (o.pass) o.detail = "max density deviation " + fmt("%.2e", worst) + "; all words up to K=4 converge";
    return o;
  });

  run(10, "van der Corput consistency gate over the battery", 600, [&] {
    const Json rest = report::battery(
                          subset(suite, [](const std::string& id) { return id != "unweighted" && id != "weighted"; }), s)
                          .json;
    gate.add(rest);
    Outcome o;
    if (rest["failures"].get<std::int64_t>() != 0) fail(o, "other battery experiments failed their expectations");
    if (!gate.violations.empty()) fail(o, "violation at " + gate.violations.front());
    if (o.pass)
      o.detail = std::to_string(gate.checked) + " instances, " + std::to_string(gate.hypothesis) +
                 " with converging differences, 0 violations";
    return o;
  });

  std::printf("%s: %d criterion(s) failed\n", g_failed ? "FAILED" : "OK", g_failed);
  return g_failed ? 1 : 0;
}
