#pragma once

// Certified evaluation of HardyExpr: every value comes with a rigorous
// absolute error bound obtained by forward error propagation. Rational
// subresults are tracked exactly while they fit in 64 bits.

#include <cstdint>
#include <optional>
#include <string>

#include "ergolab/errors.hpp"
#include "ergolab/expr.hpp"
#include "ergolab/real.hpp"

namespace ergolab {

enum class Tier : int { LongDouble = 0, Quad = 1, Mp = 2, MpDouble = 3 };

const char* tier_name(Tier t);

struct PrecisionPolicy {
  int digits = 50;               // MPFR tier precision in decimal digits
  Tier max_tier = Tier::MpDouble;
  Tier min_tier = Tier::LongDouble;
};

/// Value with absolute error bound at working type R.
template <class R>
struct Approx {
  R value;
  R err;
  std::optional<Rational> exact;
};

/// Evaluates at t (with optional exact rational value of t) at the precision
/// of R. Throws DomainError when the error bound cannot keep an argument of
/// ln/pow/div away from the singular set, OverflowError when exp overflows.
template <class R>
Approx<R> eval_approx(const HardyExpr& e, const R& t, const std::optional<Rational>& t_exact, unsigned bits);

extern template Approx<long double> eval_approx(const HardyExpr&, const long double&,
                                                const std::optional<Rational>&, unsigned);
extern template Approx<Quad> eval_approx(const HardyExpr&, const Quad&, const std::optional<Rational>&, unsigned);
extern template Approx<MpReal> eval_approx(const HardyExpr&, const MpReal&, const std::optional<Rational>&,
                                           unsigned);

class OverflowError : public DomainError {
 public:
  explicit OverflowError(const std::string& what) : DomainError(what) {}
};

/// Smallest t = 2^j (0 <= j <= 62) such that the expression evaluates without
/// a domain error at every 2^i, i >= j. Overflow counts as valid. Throws
/// DomainError if the expression is invalid at 2^62.
std::int64_t validity_threshold(const HardyExpr& e);

struct MpEvaluation {
  MpReal value;
  MpReal err;
};

/// Evaluates at t given as a constant expression ("1000000", "e", "3/2") at
/// `digits` precision. Throws DomainError if t is below the validity
/// threshold.
MpEvaluation evaluate(const HardyExpr& e, const std::string& t_text, int digits);

/// Mutable hint carried by a sequential caller so that runs of indices that
/// need a higher tier do not retry the lower ones every time. Only used for
/// certified integer outcomes, which do not depend on the tier.
struct TierHint {
  Tier tier = Tier::LongDouble;
  int streak = 0;
};

/// Evaluation at integer points with automatic precision escalation.
class CertifiedEvaluator {
 public:
  explicit CertifiedEvaluator(HardyExpr e, PrecisionPolicy policy = {});

  const HardyExpr& expr() const { return expr_; }
  const PrecisionPolicy& policy() const { return policy_; }
  std::int64_t threshold() const { return threshold_; }

  /// floor(f(n)), certified. Throws PrecisionExhausted if all tiers straddle.
  std::int64_t floor_at(std::int64_t n, TierHint* hint = nullptr) const;
  /// Sign of f(n) - k, certified; 0 only when exactly equal.
  int compare_at(std::int64_t n, const Rational& k, TierHint* hint = nullptr) const;
  /// f(n) mod 1 in [0,1) with absolute error below `tol`. Tiers are tried
  /// from policy().min_tier upward, so the result depends only on n.
  double frac_at(std::int64_t n, double tol = 1e-12) const;
  /// Lowest tier whose error at n is below tol for frac_at.
  Tier tier_for_frac(std::int64_t n, double tol) const;
  /// f(n) rounded to long double, with the certified error of the first tier
  /// reaching err <= rel_tol * |f(n)|, or of the top tier if none does.
  Approx<long double> value_at(std::int64_t n, long double rel_tol = 1e-12L) const;

 private:
  HardyExpr expr_;
  PrecisionPolicy policy_;
  std::int64_t threshold_;
};

}  // namespace ergolab
