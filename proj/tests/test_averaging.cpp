#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include <gmp.h>
#include <mpfr.h>

#include "doctest.h"
#include "ergolab/averaging.hpp"
#include "ergolab/weights.hpp"

using namespace ergolab;

namespace {

ExperimentConfig config(const char* f, std::int64_t N, const char* x = "e:0", const char* model = "shift") {
  ExperimentConfig c;
  c.model = OperatorModel::parse(model);
  c.x = VectorModel::parse(x);
  c.seq.f = HardyExpr::parse(f);
  c.N = N;
  c.validate();
  return c;
}

// ||N_eff^-1 sum_{n in A} T^{a_n} x||^2 for the shift at every checkpoint,
// from the O(N^2) double sum over pairs with integer-scaled coefficients,
// rounded to nearest double.
std::vector<double> brute_norm2(const std::vector<std::int64_t>& a, const std::vector<std::uint8_t>& in_A,
                                const VectorModel& x, const std::vector<std::int64_t>& checkpoints) {
  const auto& q = *x.exact();
  std::int64_t L = 1;
  for (const auto& r : q) L = std::lcm(L, r.den());
  std::vector<__int128> c;
  for (const auto& r : q) c.push_back(static_cast<__int128>(r.num()) * (L / r.den()));
  const std::int64_t w = x.width();
  auto G = [&](std::int64_t d) {  // sum_i c_i c_{i+d}
    __int128 s = 0;
    for (std::int64_t i = 0; i < w; ++i)
      if (i + d >= 0 && i + d < w) s += c[i] * c[i + d];
    return s;
  };
  std::vector<double> out;
  __int128 S = 0;
  std::int64_t count = 0;
  std::size_t next = 0;
  mpq_t v;
  mpq_init(v);
  mpfr_t r;
  mpfr_init2(r, 53);
  for (std::int64_t n = 0; n < checkpoints.back(); ++n) {
    if (in_A[n]) {
      ++count;
      S += G(0);
      for (std::int64_t m = 0; m < n; ++m)
        if (in_A[m]) S += 2 * G(a[n] - a[m]);
    }
    if (n + 1 == checkpoints[next]) {
      const std::string num = std::to_string(static_cast<long long>(S));  // fits: |S| < 2^63 here
      mpq_set_str(v, num.c_str(), 10);
      mpq_t den;
      mpq_init(den);
      mpz_set_si(mpq_numref(den), L);
      mpz_mul_si(mpq_numref(den), mpq_numref(den), L);
      mpz_mul_si(mpq_numref(den), mpq_numref(den), count);
      mpz_mul_si(mpq_numref(den), mpq_numref(den), count);
      mpq_div(v, v, den);
      mpq_clear(den);
      mpfr_set_q(r, v, MPFR_RNDN);
      out.push_back(count ? mpfr_get_d(r, MPFR_RNDN) : 0.0);
      ++next;
    }
  }
  mpfr_clear(r);
  mpq_clear(v);
  return out;
}

}  // namespace

TEST_CASE("injective exponents: squared norm of the shift average is exactly 1/N") {
  const auto tr = vector_average(config("t^(3/2)", 20000));
  REQUIRE(tr.exact);
  for (const auto& p : tr.points) REQUIRE(p.norm2 == 1.0 / static_cast<double>(p.N));
}

TEST_CASE("bucketed norms equal the rational double sum") {
  const char* fs[] = {"t^(3/2)", "t^(1/2)", "t^2+t"};
  const char* hs[] = {"zero", "period:1,-1"};
  const char* As[] = {"nat", "ap:1,3", "rot:alpha=sqrt2-1,lo=0,hi=1/3"};
  for (const char* f : fs)
    for (const char* h : hs)
      for (const char* A : As) {
        ExperimentConfig c = config(f, 1000, "coords:offset=-1;1,-1/2,1/3");
        c.seq.h = Perturbation::parse(h);
        c.A = IndexSet::parse(A);
        c.validate();
        const auto seq = generate_a(c.seq, c.N);
        const auto ind = c.A.indicator(c.N);
        const auto tr = vector_average(c, seq);
        REQUIRE(tr.exact);
        const auto brute = brute_norm2(seq.a, ind, c.x, c.checkpoints);
        for (std::size_t i = 0; i < tr.points.size(); ++i) REQUIRE(tr.points[i].norm2 == brute[i]);
      }
}

TEST_CASE("gram path agrees with the materialized vector") {
  ExperimentConfig c = config("t^(3/2)", 5000, "coords:offset=0;1,2,-1", "simshift:1,2");
  c.weight = WeightSpec::parse("sqrt2*t^2");
  const auto g = vector_average(c);
  const auto m = vector_average_materialized(c);
  REQUIRE(g.points.size() == m.points.size());
  for (std::size_t i = 0; i < g.points.size(); ++i)
    CHECK(g.points[i].norm2 == doctest::Approx(m.points[i].norm2).epsilon(1e-12));
}

TEST_CASE("difference averages") {
  SUBCASE("lacunary a_n = 2n keeps norm 1") {
    const auto tr = difference_average(config("2*t", 2000), 1);
    for (const auto& p : tr.points) CHECK(p.norm2 == 1);
  }
  SUBCASE("[n^(3/2)], k = 1: sum of squared multiplicities over N^2") {
    const ExperimentConfig c = config("t^(3/2)", 20000);
    const auto seq = generate_a(c.seq, c.N + 1);
    const auto tr = difference_average(c, 1, seq);
    std::map<std::int64_t, std::int64_t> mu;
    std::size_t next = 0;
    long double sq = 0;
    for (std::int64_t j = 1; j <= c.N; ++j) {
      const std::int64_t v = seq.a[j] - seq.a[j - 1];
      sq += 2 * mu[v] + 1;  // (mu + 1)^2 - mu^2
      ++mu[v];
      if (next < tr.points.size() && tr.points[next].N == j) {
        CHECK(tr.points[next].norm2 == doctest::Approx(static_cast<double>(sq / (static_cast<long double>(j) * j))));
        ++next;
      }
    }
    CHECK(next == tr.points.size());
  }
}

TEST_CASE("weak averages") {
  ExperimentConfig c = config("t^(3/2)", 2000);
  c.witnesses = {VectorModel::unit(0), VectorModel::parse("coords:offset=0;1,1,1,1,1")};
  const auto w = weak_average(c);
  REQUIRE(w.per_witness.size() == 2);
  for (double v : w.per_witness[0].values) CHECK(v == 0);
  // a_n <= 4 for n = 1, 2: the count over N sqrt 5.
  for (std::size_t i = 0; i < w.per_witness[1].checkpoints.size(); ++i)
    CHECK(w.per_witness[1].values[i] ==
          doctest::Approx(2.0 / (w.per_witness[1].checkpoints[i] * std::sqrt(5.0))));

  ExperimentConfig u = config("t^(3/2)", 2000, "e:0", "diagu:sqrt2");
  u.witnesses = {VectorModel::unit(0)};
  const WeakAverage wu = weak_average(u);
  for (double v : wu.per_witness[0].values) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("unitary diagonal: norm equals the scalar rotation average") {
  ExperimentConfig c = config("t^(3/2)", 50000, "e:0", "diagu:sqrt3");
  c.weight = WeightSpec::parse("sqrt2*t^2");
  const auto seq = generate_a(c.seq, c.N);
  const auto tr = vector_average(c, seq);
  const auto sc = scalar_weighted_average(c.weight, seq.a, HardyExpr::parse("sqrt3"), c.N, c.checkpoints);
  for (std::size_t i = 0; i < tr.points.size(); ++i)
    CHECK(tr.points[i].norm2 == doctest::Approx(std::norm(sc.values[i])).epsilon(1e-12));
}

TEST_CASE("thread count does not change reported values") {
  ExperimentConfig c = config("t^(5/2)*ln(t)", 30000, "coords:offset=0;1,-1,1/2");
  c.weight = WeightSpec::parse("t^(1/2)");
  c.A = IndexSet::parse("rot:alpha=sqrt2-1,lo=0,hi=1/3");
  const auto one = vector_average(c);
  c.jobs = 3;
  const auto three = vector_average(c);
  REQUIRE(one.points.size() == three.points.size());
  for (std::size_t i = 0; i < one.points.size(); ++i) {
    CHECK(one.points[i].norm2 == three.points[i].norm2);
    CHECK(one.points[i].value == three.points[i].value);
  }
}

TEST_CASE("verdict rules") {
  std::vector<std::int64_t> cps;
  std::vector<std::complex<double>> decay, flat, wobble;
  for (std::int64_t n = 100; n <= 1000000; n = n * 5 / 4) {
    cps.push_back(n);
    decay.emplace_back(1 / std::sqrt(static_cast<double>(n)));
    flat.emplace_back(1.0);
    wobble.emplace_back(cps.size() % 2 ? 0.3 : 0.7);
  }
  CHECK(summarize(cps, decay, {0.01, 0.1}).verdict == Verdict::ConvergesToZero);
  CHECK(summarize(cps, flat, {0.02, 0.1}).verdict == Verdict::ConvergesNonzero);
  CHECK(summarize(cps, wobble, {0.02, 0.1}).verdict == Verdict::Diverges);
}
