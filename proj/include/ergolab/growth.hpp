#pragma once

// Growth comparison and the classes P_m, P'_m and M_l.
//
// P_m (m >= 1): f, f', ..., f^(m) eventually positive, f^(m-1) / (t f^(m))
// bounded, and sup_{s >= t} f^(m)(s) / f^(m)(t) bounded.
// P'_m: t^(m-1) < f <~ t^m and f^(m-1) <~ t f^(m).
// M_l: t^l ln t < g < t^(l+1).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ergolab/evaluate.hpp"
#include "ergolab/expr.hpp"
#include "ergolab/normal_form.hpp"

namespace ergolab {

enum class GrowthOrder { Less, Equivalent, Greater, Undecided };

const char* growth_order_name(GrowthOrder o);

enum class GrowthVerdict { Pm, PmPrime, Ml, RationalPolyResidue, Unclassified };

const char* growth_verdict_name(GrowthVerdict v);

struct Evidence {
  std::string condition;  // e.g. "m=2:positive:f''", "m=2:ratio", "m=2:tail-sup"
  std::string method;     // "symbolic" or "sampled"
  double horizon = 0;     // largest t inspected; infinity for symbolic
  double observed = 0;    // limit (symbolic) or largest sampled value
  bool passed = false;
};

struct GrowthClass {
  GrowthVerdict verdict = GrowthVerdict::Unclassified;
  int index = 0;  // m or l
  bool symbolic = false;
  std::vector<Evidence> evidence;
  std::string note;
};

struct GrowthOptions {
  int m_max = 6;
  double horizon = 1152921504606846976.0;  // 2^60
  PrecisionPolicy precision{};
  /// "Bounded" means the running maximum grows by less than this factor per
  /// doubling of t over the last half of the samples.
  double bounded_growth = 0.01;
};

/// Throws DomainError if f is not eventually positive.
GrowthOrder compare_growth(const HardyExpr& f, const HardyExpr& g, const GrowthOptions& opt = {});

GrowthClass classify_Pm(const HardyExpr& f, const GrowthOptions& opt = {});
GrowthClass classify_Pm_prime(const HardyExpr& f, const GrowthOptions& opt = {});
GrowthClass classify_Ml(const HardyExpr& g, int l_max = 6, const GrowthOptions& opt = {});

/// True if f(t) > 0 for all large t (symbolically or at the sampled tail).
bool eventually_positive(const HardyExpr& f, const GrowthOptions& opt = {});

/// Log-spaced sample points t0 * 2^j up to the horizon, t0 the validity
/// threshold (at least 16).
std::vector<std::int64_t> growth_samples(const HardyExpr& f, double horizon);

/// Largest per-doubling growth rate of the running maximum of `values` over
/// the last half of the samples (values taken at consecutive doublings).
double running_max_growth(const std::vector<long double>& values);

}  // namespace ergolab
