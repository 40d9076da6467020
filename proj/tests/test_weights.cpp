#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "doctest.h"
#include "ergolab/weights.hpp"

using namespace ergolab;
using cd = std::complex<double>;

namespace {

cd e_of(long double x) {
  x -= std::floor(x);
  const long double a = 2 * 3.14159265358979323846264338327950288L * x;
  return {static_cast<double>(std::cos(a)), static_cast<double>(std::sin(a))};
}

// N^-1 sum_{n<=N} e(n theta) in closed form.
cd geometric_mean(long double theta, std::int64_t N) {
  const cd q = e_of(theta);
  return q * (1.0 - e_of(theta * N)) / (1.0 - q) / static_cast<double>(N);
}

}  // namespace

TEST_CASE("Weyl sums of sqrt2*t match the geometric-series closed form") {
  const auto w = weyl_test(WeightSpec::parse("sqrt2*t"), 200000, 3);
  CHECK(w.pass);
  for (int m = 1; m <= 3; ++m) {
    const auto& tr = w.traces[m - 1];
    for (std::size_t i = 0; i < tr.checkpoints.size(); ++i) {
      const cd expect = geometric_mean(m * std::sqrt(2.0L), tr.checkpoints[i]);
      REQUIRE(std::abs(tr.values[i] - expect) < 1e-9);
    }
  }
}

TEST_CASE("t/2 gives alternating signs and fails Weyl") {
  const auto c = weights(WeightSpec::parse("t/2"), 6);
  for (int n = 1; n <= 6; ++n) CHECK(c[n - 1].real() == doctest::Approx(n % 2 ? -1.0 : 1.0));
  CHECK_FALSE(weyl_test(WeightSpec::parse("t/2"), 100000, 5).pass);
}

TEST_CASE("generalized polynomial phases") {
  // sqrt2*[n^(3/2)] mod 1 against a direct long double evaluation for small n.
  const auto ph = phases(WeightSpec::parse("gp:0;sqrt2:t^(3/2)"), 2000);
  for (std::int64_t n = 1; n <= 2000; ++n) {
    const long double fl = std::floor(std::pow(static_cast<long double>(n), 1.5L));
    long double x = std::sqrt(2.0L) * fl;
    x -= std::floor(x);
    const double d = std::fabs(ph.phase[n - 1] - static_cast<double>(x));
    CHECK(std::min(d, 1 - d) < 1e-9);
  }
}

TEST_CASE("equidistribution trichotomy") {
  CHECK(boshernitzan_trichotomy(HardyExpr::parse("t^(3/2)")).verdict == BoshVerdict::Equidistributed);
  CHECK(boshernitzan_trichotomy(HardyExpr::parse("ln(t)")).verdict == BoshVerdict::Diverges);
  const auto half = boshernitzan_trichotomy(HardyExpr::parse("t/2"));
  CHECK(half.verdict == BoshVerdict::CesaroDegenerate);
  REQUIRE(half.witness);
  const auto mixed = boshernitzan_trichotomy(HardyExpr::parse("t^2+ln(t)"));
  CHECK(mixed.verdict == BoshVerdict::Diverges);
  CHECK(mixed.dense);
}

TEST_CASE("equidistributed verdicts are confirmed by Weyl sums") {
  for (const char* g : {"t^(3/2)", "sqrt2*t^2", "t^(1/2)", "t^(5/2)*ln(t)"}) {
    BoshOptions opt;
    opt.N = 1000000;
    const auto b = boshernitzan_trichotomy(HardyExpr::parse(g), opt);
    CHECK_MESSAGE(b.verdict == BoshVerdict::Equidistributed, std::string(g));
    REQUIRE(b.weyl);
    CHECK_MESSAGE(b.weyl->pass, std::string(g));
  }
}

TEST_CASE("tuple family size matches a brute-force count") {
  for (int k_max = 1; k_max <= 4; ++k_max)
    for (int m_bound = 1; m_bound <= 3; ++m_bound) {
      std::size_t count = 0;
      for (int k = 1; k <= k_max; ++k) {
        std::vector<int> m(k + 1, -m_bound);
        while (true) {
          int s = 0;
          for (int v : m) s += std::abs(v);
          if (m[0] != 0 && m[k] > 0 && s <= m_bound) ++count;
          int i = 0;
          while (i <= k && m[i] == m_bound) m[i++] = -m_bound;
          if (i > k) break;
          ++m[i];
        }
      }
      CHECK(q_tuples(k_max, m_bound).size() == count);
    }
}

TEST_CASE("property (Q) verdicts") {
  const auto root = q_test(WeightSpec::parse("t^(1/2)"));
  CHECK(root.overall == QOverall::Holds);
  CHECK(root.route == QRoute::MlMembership);

  const auto tlog = q_test(WeightSpec::parse("t*ln(t)"));
  CHECK(tlog.overall == QOverall::Fails);
  REQUIRE(tlog.witness);
  CHECK(*tlog.witness == std::vector<long long>{-1, 1});
  REQUIRE(tlog.witness_trace);
  CHECK(tlog.witness_trace->summary.oscillation >= 0.1);

  CHECK(q_test(WeightSpec::parse("t^2+ln(t)^2")).overall == QOverall::Holds);
  CHECK(q_test(WeightSpec::parse("t/2")).route == QRoute::DegeneratePeriodic);
}

TEST_CASE("scalar weighted average against a direct sum") {
  std::vector<std::int64_t> a(5000);
  for (std::int64_t n = 1; n <= 5000; ++n) a[n - 1] = static_cast<std::int64_t>(std::floor(std::pow((long double)n, 1.5L)) + n);
  const auto tr = scalar_weighted_average(WeightSpec::parse("sqrt2*t^2"), a, HardyExpr::parse("sqrt3"), 5000);
  cd s = 0;
  std::size_t next = 0;
  for (std::int64_t n = 1; n <= 5000; ++n) {
    s += e_of(std::sqrt(2.0L) * n * n + std::sqrt(3.0L) * a[n - 1]);
    if (next < tr.checkpoints.size() && tr.checkpoints[next] == n) {
      CHECK(std::abs(tr.values[next] - s / static_cast<double>(n)) < 1e-9);
      ++next;
    }
  }
  CHECK(next == tr.checkpoints.size());
}
