#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "ergolab/index_set.hpp"

using namespace ergolab;

namespace {

// Orbit of the rotation in long double; points within 1e-9 of an endpoint
// are left undecided.
int orbit_member(long double alpha, long double lo, long double hi, std::int64_t n) {
  long double y = n * alpha;
  y -= std::floor(y);
  if (std::fabs(y - lo) < 1e-9L || std::fabs(y - hi) < 1e-9L) return -1;
  return lo <= y && y < hi;
}

}  // namespace

TEST_CASE("arithmetic progressions") {
  const IndexSet A = IndexSet::parse("ap:1,3");
  CHECK(A.elements(12) == std::vector<std::int64_t>{1, 4, 7, 10});
  CHECK(A.nominal_density() == doctest::Approx(1.0 / 3));
  const auto d = density(A, 30000, geometric_checkpoints(100, 30000));
  CHECK(std::fabs(d.value - 1.0 / 3) <= 1.0 / 30000);
  CHECK(d.converged);
}

TEST_CASE("rotation return times match an independent orbit simulation") {
  const IndexSet A = IndexSet::parse("rot:alpha=sqrt2-1,lo=0,hi=1/3");
  const long double alpha = std::sqrt(2.0L) - 1;
  std::int64_t decided = 0;
  for (std::int64_t n = 1; n <= 100000; ++n) {
    const int o = orbit_member(alpha, 0, 1.0L / 3, n);
    if (o < 0) continue;
    ++decided;
    REQUIRE(A.contains(n) == (o == 1));
  }
  CHECK(decided > 99990);
}

TEST_CASE("rational rotations are periodic") {
  const IndexSet A = IndexSet::parse("rot:alpha=1/4,lo=0,hi=1/2");
  // n/4 mod 1 in [0, 1/2): n = 0, 1 mod 4
  CHECK(A.elements(9) == std::vector<std::int64_t>{1, 4, 5, 8, 9});
}

TEST_CASE("spec strings round-trip") {
  for (const char* s : {"nat", "ap:2,5", "rot:alpha=sqrt2-1,lo=0,hi=1/3,x0=0", "champ", "blocks", "mask:0110,repeat"}) {
    const IndexSet A = IndexSet::parse(s);
    CHECK(IndexSet::parse(A.str()).elements(500) == A.elements(500));
  }
}

TEST_CASE("A_{k,m} against a direct scan") {
  const IndexSet A = IndexSet::parse("mask:1101001101,repeat");
  const std::int64_t N = 200;
  for (std::int64_t m = 1; m <= 3; ++m)
    for (std::int64_t k = 1; k <= m; ++k) {
      std::vector<std::int64_t> expected;
      for (std::int64_t n = 1; n <= N; ++n) {
        if (!A.contains(n) || !A.contains(n + m)) continue;
        std::int64_t c = 0;
        for (std::int64_t j = n; j <= n + m; ++j) c += A.contains(j);
        if (c == k + 1) expected.push_back(n);
      }
      CHECK(extract_Akm(A, k, m, N).elements(N) == expected);
    }
}

TEST_CASE("word densities of a periodic mask") {
  const auto r = regularity_report(IndexSet::parse("mask:110,repeat"), 2, 30000);
  CHECK(r.verdict == Regularity::Regular);
  for (const auto& w : r.words) {
    if (w.word == "11") CHECK(w.density == doctest::Approx(1.0 / 3).epsilon(1e-3));
    if (w.word == "00") CHECK(w.density == 0);
  }
}

TEST_CASE("the dyadic block set has no density") {
  const auto d = density(IndexSet::blocks(), 1 << 20, geometric_checkpoints(100, 1 << 20));
  CHECK_FALSE(d.converged);
  CHECK(d.band > 0.1);
}

TEST_CASE("RLE1 round-trip") {
  const IndexSet A = IndexSet::parse("rot:alpha=sqrt3-1,lo=1/4,hi=3/4");
  std::stringstream s;
  write_rle1(s, A, 5000);
  const IndexSet B = IndexSet::read_rle1(s);
  CHECK(B.elements(5000) == A.elements(5000));
}
