#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "ergolab/errors.hpp"
#include "ergolab/evaluate.hpp"
#include "ergolab/expr.hpp"
#include "ergolab/growth.hpp"

using namespace ergolab;

namespace {

// The twelve-member corpus with hand-written asymptotic type t^alpha ln^beta t.
struct Member {
  const char* text;
  double alpha;
  int beta;
};

const std::vector<Member> kCorpus = {
    {"t", 1, 0},
    {"t^2+t", 2, 0},
    {"t^3-t+1", 3, 0},
    {"t^(1/2)", 0.5, 0},
    {"t^(3/2)", 1.5, 0},
    {"t^(5/2)", 2.5, 0},
    {"t^(3/2)*ln(t)", 1.5, 1},
    {"t^(3/2)/ln(t)", 1.5, -1},
    {"2*t^(5/2)+sqrt3*t^2-t^(1/2)", 2.5, 0},
    {"t*ln(t)", 1, 1},
    {"t^2*ln(t)", 2, 1},
    {"ln(t)", 0, 1},
};

GrowthOrder oracle_order(const Member& a, const Member& b) {
  if (a.alpha != b.alpha) return a.alpha < b.alpha ? GrowthOrder::Less : GrowthOrder::Greater;
  if (a.beta != b.beta) return a.beta < b.beta ? GrowthOrder::Less : GrowthOrder::Greater;
  return GrowthOrder::Equivalent;
}

double eval_at(const HardyExpr& e, const char* t) { return static_cast<double>(evaluate(e, t, 40).value.to_ld()); }

}  // namespace

TEST_CASE("parse and print round-trip on the corpus") {
  for (const auto& m : kCorpus) {
    const HardyExpr e = HardyExpr::parse(m.text);
    CHECK(HardyExpr::parse(e.str()) == e);
  }
}

TEST_CASE("parse errors carry a position") {
  CHECK_THROWS_AS(HardyExpr::parse("t^"), ParseError);
  CHECK_THROWS_AS(HardyExpr::parse("sin(t)"), ParseError);
  CHECK_THROWS_AS(HardyExpr::parse("(t+1"), ParseError);
  try {
    HardyExpr::parse("t+*2");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() >= 1);
  }
}

TEST_CASE("derivatives agree with hand-derived closed forms") {
  const double t = 7.25;
  struct Case {
    const char* f;
    double expected;
  } cases[] = {
      {"t^(3/2)*ln(t)", 1.5 * std::sqrt(t) * std::log(t) + std::sqrt(t)},
      {"t^(3/2)/ln(t)", 1.5 * std::sqrt(t) / std::log(t) - std::sqrt(t) / (std::log(t) * std::log(t))},
      {"t^2+ln(t)^2", 2 * t + 2 * std::log(t) / t},
      {"exp(ln(t)^2)", std::exp(std::log(t) * std::log(t)) * 2 * std::log(t) / t},
      {"sqrt2*t^2", 2 * std::sqrt(2.0) * t},
  };
  for (const auto& c : cases) {
    const HardyExpr d = differentiate(HardyExpr::parse(c.f));
    CHECK(eval_at(d, "29/4") == doctest::Approx(c.expected).epsilon(1e-12));
  }
}

TEST_CASE("second derivative of t^(5/2)*ln(t)") {
  const double t = 3.5;
  const double expected = 3.75 * std::sqrt(t) * std::log(t) + 4 * std::sqrt(t);
  CHECK(eval_at(differentiate(HardyExpr::parse("t^(5/2)*ln(t)"), 2), "7/2") ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("compare_growth matches the t^alpha ln^beta t order and is a strict weak order") {
  std::vector<HardyExpr> e;
  for (const auto& m : kCorpus) e.push_back(HardyExpr::parse(m.text));
  const std::size_t n = e.size();
  std::vector<std::vector<GrowthOrder>> ord(n, std::vector<GrowthOrder>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      ord[i][j] = compare_growth(e[i], e[j]);
      CHECK_MESSAGE(ord[i][j] == oracle_order(kCorpus[i], kCorpus[j]), (std::string(kCorpus[i].text) + " vs " + kCorpus[j].text));
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (ord[i][j] == GrowthOrder::Less) CHECK(ord[j][i] == GrowthOrder::Greater);
      for (std::size_t k = 0; k < n; ++k)
        if (ord[i][j] == GrowthOrder::Less && ord[j][k] == GrowthOrder::Less) CHECK(ord[i][k] == GrowthOrder::Less);
    }
}

TEST_CASE("P_m and M_l classification of the corpus") {
  struct Expect {
    const char* f;
    GrowthVerdict pm;
    int m;
    GrowthVerdict ml;
    int l;
  } grid[] = {
      {"t", GrowthVerdict::Pm, 1, GrowthVerdict::RationalPolyResidue, 0},
      {"t^2+t", GrowthVerdict::Pm, 2, GrowthVerdict::RationalPolyResidue, 0},
      {"t^3-t+1", GrowthVerdict::Pm, 3, GrowthVerdict::RationalPolyResidue, 0},
      {"t^(1/2)", GrowthVerdict::Pm, 1, GrowthVerdict::Ml, 0},
      {"t^(3/2)", GrowthVerdict::Pm, 2, GrowthVerdict::Ml, 1},
      {"t^(5/2)", GrowthVerdict::Pm, 3, GrowthVerdict::Ml, 2},
      {"t^(3/2)*ln(t)", GrowthVerdict::Pm, 2, GrowthVerdict::Ml, 1},
      {"t^(3/2)/ln(t)", GrowthVerdict::Pm, 2, GrowthVerdict::Ml, 1},
      {"2*t^(5/2)+sqrt3*t^2-t^(1/2)", GrowthVerdict::Pm, 3, GrowthVerdict::Ml, 2},
  };
  for (const auto& g : grid) {
    const HardyExpr f = HardyExpr::parse(g.f);
    const GrowthClass pm = classify_Pm(f);
    CHECK_MESSAGE(pm.verdict == g.pm, std::string(g.f));
    CHECK_MESSAGE(pm.index == g.m, std::string(g.f));
    const GrowthClass ml = classify_Ml(f);
    CHECK_MESSAGE(ml.verdict == g.ml, std::string(g.f));
    if (g.ml == GrowthVerdict::Ml) CHECK_MESSAGE(ml.index == g.l, std::string(g.f));
  }
  for (const char* f : {"t*ln(t)", "t^2*ln(t)", "ln(t)"}) {
    CHECK_MESSAGE(classify_Pm(HardyExpr::parse(f)).verdict == GrowthVerdict::Unclassified, std::string(f));
    CHECK_MESSAGE(classify_Ml(HardyExpr::parse(f)).verdict == GrowthVerdict::Unclassified, std::string(f));
  }
}

TEST_CASE("a floor that stays on an integer is an error, not a guess") {
  // (sqrt2*t)^2 = 2 t^2: every error bound straddles the integer.
  CertifiedEvaluator ev(HardyExpr::parse("(sqrt2*t)^2"));
  CHECK_THROWS_AS(ev.floor_at(7), PrecisionExhausted);
  CHECK(CertifiedEvaluator(HardyExpr::parse("2*t^2")).floor_at(7) == 98);
}
