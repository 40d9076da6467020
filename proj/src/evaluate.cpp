#include "ergolab/evaluate.hpp"

#include <cmath>
#include <limits>

namespace ergolab {
namespace {

// Raised when the error bound is too wide to decide a domain condition at the
// current precision. Callers escalate to the next tier.
struct Uncertain {};

// Multiplier on the unit roundoff covering libm and MPFR function accuracy.
constexpr int kLibmSlack = 8;

template <class R>
struct Ctx {
  using O = RealOps<R>;
  R t;
  std::optional<Rational> t_exact;
  unsigned bits;
  R u;
  R slack;
  R zero;
  R one;
};

template <class R>
Approx<R> finish(const Ctx<R>& c, R value, R err, std::optional<Rational> exact = std::nullopt) {
  using O = RealOps<R>;
  if (!O::finite(value) || !O::finite(err)) throw OverflowError("non-finite intermediate value");
  err = err + err * c.slack;
  return Approx<R>{std::move(value), std::move(err), std::move(exact)};
}

template <class R>
Approx<R> from_exact(const Ctx<R>& c, const Rational& q) {
  using O = RealOps<R>;
  R v = O::from_rational(q, c.bits);
  R err = q.is_integer() ? c.zero : O::abs(v) * c.u;
  return Approx<R>{std::move(v), std::move(err), q};
}

// Decides x > 0 for x known to lie in [value - err, value + err].
template <class R>
void require_positive(const R& value, const R& err, const char* what) {
  if (value - err > R(value - value)) return;
  if (value + err <= R(value - value)) throw DomainError(what);
  throw Uncertain{};
}

template <class R>
Approx<R> eval(const ExprNode& n, const Ctx<R>& c) {
  using O = RealOps<R>;
  switch (n.op) {
    case Op::Const: return from_exact(c, n.value);
    case Op::Named: {
      R v = O::named(n.named, c.bits);
      R err = O::abs(v) * c.slack;
      return Approx<R>{std::move(v), std::move(err), std::nullopt};
    }
    case Op::Var:
      if (c.t_exact) return from_exact(c, *c.t_exact);
      return Approx<R>{c.t, c.zero, std::nullopt};
    case Op::Neg: {
      Approx<R> a = eval(*n.lhs, c);
      std::optional<Rational> q;
      if (a.exact) q = -*a.exact;
      return Approx<R>{-a.value, a.err, q};
    }
    case Op::Add:
    case Op::Sub: {
      Approx<R> a = eval(*n.lhs, c);
      Approx<R> b = eval(*n.rhs, c);
      if (a.exact && b.exact) {
        auto q = n.op == Op::Add ? Rational::try_add(*a.exact, *b.exact) : Rational::try_sub(*a.exact, *b.exact);
        if (q) return from_exact(c, *q);
      }
      R v = n.op == Op::Add ? a.value + b.value : a.value - b.value;
      R err = a.err + b.err + O::abs(v) * c.u;
      return finish(c, std::move(v), std::move(err));
    }
    case Op::Mul: {
      Approx<R> a = eval(*n.lhs, c);
      Approx<R> b = eval(*n.rhs, c);
      if (a.exact && b.exact) {
        if (auto q = Rational::try_mul(*a.exact, *b.exact)) return from_exact(c, *q);
      }
      if ((a.exact && a.exact->is_zero()) || (b.exact && b.exact->is_zero())) return from_exact(c, Rational(0));
      R v = a.value * b.value;
      R err = O::abs(a.value) * b.err + O::abs(b.value) * a.err + a.err * b.err + O::abs(v) * c.u;
      return finish(c, std::move(v), std::move(err));
    }
    case Op::Div: {
      Approx<R> a = eval(*n.lhs, c);
      Approx<R> b = eval(*n.rhs, c);
      if (b.exact && b.exact->is_zero()) throw DomainError("division by zero");
      if (a.exact && b.exact) {
        if (auto q = Rational::try_div(*a.exact, *b.exact)) return from_exact(c, *q);
      }
      R bb = O::abs(b.value);
      require_positive(bb, b.err, "division by a vanishing denominator");
      R v = a.value / b.value;
      R err = (O::abs(a.value) * b.err + bb * a.err) / (bb * (bb - b.err)) + O::abs(v) * c.u;
      return finish(c, std::move(v), std::move(err));
    }
    case Op::Ln: {
      Approx<R> a = eval(*n.lhs, c);
      if (a.exact && *a.exact == Rational(1)) return from_exact(c, Rational(0));
      require_positive(a.value, a.err, "logarithm of a non-positive argument");
      R v = O::log(a.value);
      R err = -O::log1p(-(a.err / a.value)) + (O::abs(v) + c.one) * c.slack;
      return finish(c, std::move(v), std::move(err));
    }
    case Op::Exp: {
      Approx<R> a = eval(*n.lhs, c);
      if (a.exact && a.exact->is_zero()) return from_exact(c, Rational(1));
      R v = O::exp(a.value);
      if (!O::finite(v)) throw OverflowError("exp overflow");
      R err = v * O::expm1(a.err) + v * c.slack;
      return finish(c, std::move(v), std::move(err));
    }
    case Op::Pow: {
      Approx<R> ex = eval(*n.rhs, c);
      Approx<R> b = eval(*n.lhs, c);
      if (b.exact && ex.exact) {
        if (auto q = Rational::try_pow(*b.exact, *ex.exact)) return from_exact(c, *q);
      }
      if (ex.exact && ex.exact->is_integer()) {
        const std::int64_t k = ex.exact->num();
        const R kk = O::from_int(k < 0 ? -k : k, c.bits);
        R ab = O::abs(b.value);
        if (k > 0 && b.err >= ab) {
          R v = O::pow(b.value, ex.value);
          R err = O::pow(ab + b.err, kk) + O::abs(v);
          return finish(c, std::move(v), std::move(err));
        }
        require_positive(ab, b.err, "negative power of a vanishing base");
        R rho = b.err / ab;
        R v = O::pow(b.value, ex.value);
        R growth = k > 0 ? O::expm1(kk * O::log1p(rho)) : O::expm1(-(kk * O::log1p(-rho)));
        R err = O::abs(v) * growth + O::abs(v) * c.slack;
        return finish(c, std::move(v), std::move(err));
      }
      require_positive(b.value, b.err, "real power of a non-positive base");
      R delta = -O::log1p(-(b.err / b.value));
      R la = O::abs(O::log(b.value));
      R v = O::pow(b.value, ex.value);
      R err = v * O::expm1((O::abs(ex.value) + ex.err) * delta + ex.err * la) + v * c.slack;
      return finish(c, std::move(v), std::move(err));
    }
  }
  throw Error(ErrorCode::Internal, "malformed expression tree");
}

template <class R>
Ctx<R> make_ctx(const R& t, const std::optional<Rational>& t_exact, unsigned bits) {
  using O = RealOps<R>;
  R u = O::unit_roundoff(bits);
  R slack = u * O::from_int(kLibmSlack, bits);
  return Ctx<R>{t, t_exact, bits, u, slack, O::from_int(0, bits), O::from_int(1, bits)};
}

unsigned tier_bits(Tier tier, const PrecisionPolicy& p) {
  switch (tier) {
    case Tier::LongDouble: return 64;
    case Tier::Quad: return 113;
    case Tier::Mp: return digits_to_bits(p.digits);
    case Tier::MpDouble: return digits_to_bits(2 * p.digits);
  }
  return 64;
}

// Evaluates at integer n on the given tier and hands the result to `fn`,
// which returns nullopt if the precision was insufficient.
template <class T, class Fn>
std::optional<T> attempt(const HardyExpr& e, std::int64_t n, Tier tier, const PrecisionPolicy& p, Fn&& fn) {
  const unsigned bits = tier_bits(tier, p);
  const Rational tn(n);
  try {
    switch (tier) {
      case Tier::LongDouble: return fn(eval_approx<long double>(e, static_cast<long double>(n), tn, bits));
      case Tier::Quad: return fn(eval_approx<Quad>(e, static_cast<Quad>(n), tn, bits));
      case Tier::Mp:
      case Tier::MpDouble: return fn(eval_approx<MpReal>(e, MpReal::from_int(n, bits), tn, bits));
    }
  } catch (const Uncertain&) {
  }
  return std::nullopt;
}

template <class T, class Fn>
T escalate(const HardyExpr& e, std::int64_t n, const PrecisionPolicy& p, TierHint* hint, const char* what,
           Fn&& fn) {
  int start = static_cast<int>(p.min_tier);
  if (hint && static_cast<int>(hint->tier) > start) start = static_cast<int>(hint->tier);
  for (int t = start; t <= static_cast<int>(p.max_tier); ++t) {
    auto tier = static_cast<Tier>(t);
    if (auto r = attempt<T>(e, n, tier, p, fn)) {
      if (hint) {
        if (t > static_cast<int>(p.min_tier) && t == start && ++hint->streak >= 256) {
          hint->tier = static_cast<Tier>(t - 1);
          hint->streak = 0;
        } else if (t != start) {
          hint->tier = tier;
          hint->streak = 0;
        }
      }
      return *r;
    }
  }
  throw PrecisionExhausted(what, n);
}

template <class R>
std::optional<std::int64_t> certified_floor(const Approx<R>& a) {
  using O = RealOps<R>;
  if (a.exact) return a.exact->floor();
  if (!(std::fabs(O::to_ld(O::abs(a.value) - a.err)) < 9.2e18L))
    throw DomainError("value outside the 64-bit integer range");
  R lo = O::floor(a.value - a.err);
  R hi = O::floor(a.value + a.err);
  if (!(lo == hi)) return std::nullopt;
  long double f = O::to_ld(lo);
  if (!(std::fabs(f) < 9.2e18L)) throw DomainError("value outside the 64-bit integer range");
  return static_cast<std::int64_t>(f);
}

template <class R>
std::optional<int> certified_compare(const Approx<R>& a, const Rational& k, unsigned bits) {
  using O = RealOps<R>;
  if (a.exact) return (*a.exact > k) - (*a.exact < k);
  R d = a.value - O::from_rational(k, bits);
  R kerr = k.is_integer() ? R(a.err - a.err) : O::abs(O::from_rational(k, bits)) * O::unit_roundoff(bits);
  R w = a.err + kerr;
  if (d - w > R(w - w)) return 1;
  if (d + w < R(w - w)) return -1;
  return std::nullopt;
}

double frac_of(const Rational& q) {
  Rational f = q - Rational(q.floor());
  return f.to_double();
}

template <class R>
std::optional<double> certified_frac(const Approx<R>& a, double tol) {
  using O = RealOps<R>;
  if (a.exact) return frac_of(*a.exact);
  if (!(O::to_ld(a.err) <= tol)) return std::nullopt;
  R f = a.value - O::floor(a.value);
  double d = static_cast<double>(O::to_ld(f));
  if (d >= 1.0) d = 0.0;
  return d;
}

}  // namespace

const char* tier_name(Tier t) {
  switch (t) {
    case Tier::LongDouble: return "long-double";
    case Tier::Quad: return "float128";
    case Tier::Mp: return "mpfr";
    case Tier::MpDouble: return "mpfr-doubled";
  }
  return "?";
}

template <class R>
Approx<R> eval_approx(const HardyExpr& e, const R& t, const std::optional<Rational>& t_exact, unsigned bits) {
  Ctx<R> c = make_ctx<R>(t, t_exact, bits);
  return eval(e.node(), c);
}

template Approx<long double> eval_approx(const HardyExpr&, const long double&, const std::optional<Rational>&,
                                         unsigned);
template Approx<Quad> eval_approx(const HardyExpr&, const Quad&, const std::optional<Rational>&, unsigned);
template Approx<MpReal> eval_approx(const HardyExpr&, const MpReal&, const std::optional<Rational>&, unsigned);

namespace {

// 1 valid, 0 invalid.
bool valid_at(const HardyExpr& e, std::int64_t t) {
  PrecisionPolicy p;
  p.digits = 60;
  for (Tier tier : {Tier::LongDouble, Tier::Quad, Tier::Mp}) {
    try {
      auto r = attempt<bool>(e, t, tier, p, [](const auto&) { return std::optional<bool>(true); });
      if (r) return true;
    } catch (const OverflowError&) {
      return true;
    } catch (const DomainError&) {
      return false;
    }
  }
  return false;
}

}  // namespace

std::int64_t validity_threshold(const HardyExpr& e) {
  if (!valid_at(e, std::int64_t{1} << 62)) throw DomainError("expression is not eventually defined: " + e.str());
  int j = 62;
  while (j > 0 && valid_at(e, std::int64_t{1} << (j - 1))) --j;
  return std::int64_t{1} << j;
}

MpEvaluation evaluate(const HardyExpr& e, const std::string& t_text, int digits) {
  require(digits >= 1, "precision digits must be positive");
  HardyExpr t = HardyExpr::parse(t_text);
  require(t.is_constant(), "evaluation point must be a constant expression");
  const unsigned bits = digits_to_bits(digits);
  auto tv = eval_approx<MpReal>(t, MpReal(bits), std::nullopt, bits);
  const std::int64_t threshold = validity_threshold(e);
  if (tv.value < MpReal::from_int(threshold, bits)) {
    throw DomainError("t below the validity threshold " + std::to_string(threshold));
  }
  try {
    auto r = eval_approx<MpReal>(e.substitute(t), MpReal(bits), std::nullopt, bits);
    return MpEvaluation{r.value, r.err};
  } catch (const Uncertain&) {
    throw PrecisionExhausted("cannot separate an argument from its singular set", 0);
  }
}

CertifiedEvaluator::CertifiedEvaluator(HardyExpr e, PrecisionPolicy policy)
    : expr_(std::move(e)), policy_(policy), threshold_(validity_threshold(expr_)) {
  require(policy_.digits >= 1, "precision digits must be positive");
  require(policy_.min_tier <= policy_.max_tier, "min tier above max tier");
}

std::int64_t CertifiedEvaluator::floor_at(std::int64_t n, TierHint* hint) const {
  return escalate<std::int64_t>(expr_, n, policy_, hint, "floor certification failed",
                                [](const auto& a) { return certified_floor(a); });
}

int CertifiedEvaluator::compare_at(std::int64_t n, const Rational& k, TierHint* hint) const {
  return escalate<int>(expr_, n, policy_, hint, "comparison certification failed", [&](const auto& a) {
    using R = std::decay_t<decltype(a.value)>;
    unsigned bits = 64;
    if constexpr (std::is_same_v<R, MpReal>) bits = a.value.bits();
    if constexpr (std::is_same_v<R, Quad>) bits = 113;
    return certified_compare(a, k, bits);
  });
}

double CertifiedEvaluator::frac_at(std::int64_t n, double tol) const {
  return escalate<double>(expr_, n, policy_, nullptr, "phase certification failed",
                          [&](const auto& a) { return certified_frac(a, tol); });
}

Tier CertifiedEvaluator::tier_for_frac(std::int64_t n, double tol) const {
  for (int t = static_cast<int>(policy_.min_tier); t <= static_cast<int>(policy_.max_tier); ++t) {
    auto tier = static_cast<Tier>(t);
    if (attempt<double>(expr_, n, tier, policy_, [&](const auto& a) { return certified_frac(a, tol); }))
      return tier;
  }
  throw PrecisionExhausted("phase certification failed", n);
}

Approx<long double> CertifiedEvaluator::value_at(std::int64_t n, long double rel_tol) const {
  std::optional<Approx<long double>> best;
  for (int t = static_cast<int>(policy_.min_tier); t <= static_cast<int>(policy_.max_tier); ++t) {
    auto r = attempt<Approx<long double>>(expr_, n, static_cast<Tier>(t), policy_, [](const auto& a) {
      using O = RealOps<std::decay_t<decltype(a.value)>>;
      return std::optional<Approx<long double>>(Approx<long double>{O::to_ld(a.value), O::to_ld(a.err), a.exact});
    });
    if (!r) continue;
    best = r;
    if (r->exact || r->err <= rel_tol * std::fabs(r->value)) return *r;
  }
  if (!best) throw PrecisionExhausted("evaluation could not be bounded", n);
  return *best;
}

}  // namespace ergolab
