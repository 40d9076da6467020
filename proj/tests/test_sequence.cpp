#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <mpfr.h>

#include "doctest.h"
#include "ergolab/errors.hpp"
#include "ergolab/sequence.hpp"

using namespace ergolab;

namespace {

std::int64_t isqrt(std::int64_t v) {
  std::int64_t r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

// floor(n^(5/2) ln n) at 256 bits straight from MPFR.
std::int64_t mpfr_floor_t52_ln(std::int64_t n) {
  mpfr_t x, l;
  mpfr_inits2(256, x, l, (mpfr_ptr)0);
  mpfr_set_si(x, n, MPFR_RNDN);
  mpfr_log(l, x, MPFR_RNDN);
  mpfr_set_si(x, n, MPFR_RNDN);
  mpfr_pow_si(x, x, 5, MPFR_RNDN);
  mpfr_sqrt(x, x, MPFR_RNDN);
  mpfr_mul(x, x, l, MPFR_RNDN);
  mpfr_floor(x, x);
  const std::int64_t r = mpfr_get_si(x, MPFR_RNDN);
  mpfr_clears(x, l, (mpfr_ptr)0);
  return r;
}

SubsequenceSpec spec(const char* f, const char* h = "zero") {
  return {HardyExpr::parse(f), Perturbation::parse(h), {}};
}

}  // namespace

TEST_CASE("[n^(3/2)] equals the integer square root of n^3") {
  const auto g = generate_a(spec("t^(3/2)"), 100000);
  REQUIRE(g.a.size() == 100000);
  for (std::int64_t n = 1; n <= 100000; ++n) REQUIRE(g.a[n - 1] == isqrt(n * n * n));
  CHECK(g.flagged == 0);
}

TEST_CASE("[n^(5/2) ln n] against a 256-bit MPFR floor") {
  const auto g = generate_a(spec("t^(5/2)*ln(t)"), 20000, 2);
  for (std::int64_t n = 1; n <= 20000; ++n) REQUIRE(g.a[n - 1] == mpfr_floor_t52_ln(n));
}

TEST_CASE("periodic perturbation and polynomial floors") {
  const auto g = generate_a(spec("t^2+t", "period:1,-1"), 1000);
  for (std::int64_t n = 1; n <= 1000; ++n) CHECK(g.a[n - 1] == n * n + n + (n % 2 == 1 ? 1 : -1));
  CHECK(g.perturbation_bound == 1);
}

TEST_CASE("negative exponents use the identity convention and are flagged") {
  const auto g = generate_a(spec("t^(1/2)", "const:-2"), 10);
  // [sqrt n] - 2 < 0 for n = 1, 2, 3
  CHECK(g.flagged == 3);
  CHECK(g.a[0] == 0);
  CHECK(g.a[8] == 1);
  CHECK(g.last_flagged == 3);
}

TEST_CASE("thread count and precision do not change the sequence") {
  for (const char* f : {"t^(3/2)", "t^(5/2)*ln(t)", "t^(3/2)/ln(t)", "2*t^(5/2)+sqrt3*t^2-t^(1/2)", "sqrt2*t^2"}) {
    SubsequenceSpec s = spec(f);
    const auto a1 = generate_a(s, 20000, 1);
    const auto a3 = generate_a(s, 20000, 3);
    s.precision.digits = 100;
    const auto hi = generate_a(s, 20000, 1);
    CHECK_MESSAGE(a1.a == a3.a, std::string(f));
    CHECK_MESSAGE(a1.a == hi.a, std::string(f));
  }
}

TEST_CASE("random perturbations are seeded and bounded") {
  const auto p = Perturbation::parse("rand:r=2,seed=42");
  const auto q = Perturbation::parse(p.str());
  CHECK(p == q);
  for (std::int64_t n = 1; n <= 1000; ++n) {
    CHECK(std::abs(p.at(n)) <= 2);
    CHECK(p.at(n) == q.at(n));
  }
}

TEST_CASE("b_k agrees with a brute-force scan for P_1 members") {
  // t: b_k = k. t^(1/2): b_k = k^2 exactly.
  const auto lin = build_bk(HardyExpr::parse("t"), 200);
  const auto root = build_bk(HardyExpr::parse("t^(1/2)"), 200);
  for (std::int64_t k = 1; k <= 200; ++k) {
    std::int64_t n = 1;
    while (n < k) ++n;
    CHECK(lin.b[k - 1] == n);
    n = 1;
    while (isqrt(n) < k) ++n;
    CHECK(root.b[k - 1] == n);
  }
}

TEST_CASE("build_bk rejects functions that never reach K") {
  CHECK_THROWS_AS(build_bk(HardyExpr::parse("1/t"), 5), DomainError);
}

TEST_CASE("dedup keeps the first occurrence in order") {
  CHECK(dedup_first({3, 1, 3, 2, 1, 5}) == std::vector<std::int64_t>{3, 1, 2, 5});
}

TEST_CASE("text and binary writers") {
  std::ostringstream t, b;
  write_sequence_text(t, {1, 22, 333});
  CHECK(t.str() == "1\n22\n333\n");
  write_sequence_binary(b, {1, -1});
  const std::string s = b.str();
  REQUIRE(s.size() == 16);
  CHECK(static_cast<unsigned char>(s[0]) == 1);
  CHECK(static_cast<unsigned char>(s[8]) == 0xff);
}
