#pragma once

// Unimodular weights e(g(n)), Weyl sums, the equidistribution trichotomy for
// subpolynomial Hardy functions and property (Q).

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ergolab/evaluate.hpp"
#include "ergolab/expr.hpp"
#include "ergolab/normal_form.hpp"
#include "ergolab/trace.hpp"

namespace ergolab {

/// alpha * [p(n)].
struct FloorTerm {
  HardyExpr alpha;
  HardyExpr p;
};

/// Phase function g: either a HardyExpr or a generalized polynomial
/// q(n) + sum alpha_i [p_i(n)].
class WeightSpec {
 public:
  WeightSpec() : g_(HardyExpr::constant(Rational(0))) {}
  static WeightSpec hardy(HardyExpr g);
  static WeightSpec generalized(HardyExpr q, std::vector<FloorTerm> terms);
  /// An expression, or `gp:q;alpha1:p1;alpha2:p2` for q + alpha1 [p1] + ...
  static WeightSpec parse(std::string_view text);

  bool is_hardy() const { return terms_.empty(); }
  bool is_trivial() const;
  /// g for Hardy specs, q for generalized polynomials.
  const HardyExpr& g() const { return g_; }
  const std::vector<FloorTerm>& floor_terms() const { return terms_; }
  std::string str() const;

  PrecisionPolicy precision{};
  double phase_tol = 1e-12;

 private:
  HardyExpr g_;
  std::vector<FloorTerm> terms_;
};

struct PhaseSequence {
  std::vector<double> phase;  // phase[n-1] = g(n) mod 1 in [0, 1)
  double max_err = 0;         // certified bound on every phase
  std::int64_t undefined = 0; // indices where g(n) is undefined (phase 0)
  Tier tier = Tier::LongDouble;
};

/// g(n) mod 1 for n = 1..N.
PhaseSequence phases(const WeightSpec& spec, std::int64_t N, int jobs = 1);
/// c_n = e(g(n)) for n = 1..N.
std::vector<std::complex<double>> weights(const WeightSpec& spec, std::int64_t N, int jobs = 1);

/// (base + theta_frac * a) mod 1 with the product reduced in __float128;
/// the phase of c_n e(theta a_n) used by every rotation average.
double rotation_phase(double base, Quad theta_frac, std::int64_t a);

/// Default schedule: geometric with ratio 2^(1/4) from 100 (or 1 when
/// N < 1000) to N.
std::vector<std::int64_t> default_checkpoints(std::int64_t N);

/// Cesaro trace of z_n over n = 1..N.
ComplexTrace cesaro_trace(const std::vector<std::complex<double>>& z, const std::vector<std::int64_t>& checkpoints,
                          const Tolerances& tol = {});

struct WeylResult {
  std::int64_t N = 0;
  int m_max = 0;
  std::vector<ComplexTrace> traces;  // traces[m-1] for N^-1 sum e(m g(n))
  double phase_err = 0;
  bool pass = false;
  Tolerances tol;
};

WeylResult weyl_test(const WeightSpec& spec, std::int64_t N, int m_max, const std::vector<std::int64_t>& checkpoints = {},
                     const Tolerances& tol = {}, int jobs = 1);
WeylResult weyl_from_phases(const PhaseSequence& ph, std::int64_t N, int m_max,
                            const std::vector<std::int64_t>& checkpoints, const Tolerances& tol);

enum class BoshVerdict { Equidistributed, CesaroDegenerate, Diverges, Inconclusive };
const char* bosh_verdict_name(BoshVerdict v);

struct BoshResult {
  BoshVerdict verdict = BoshVerdict::Inconclusive;
  bool symbolic = false;
  bool dense = false;               // (e(g(n))) dense in the circle
  std::optional<HardyExpr> witness; // rational polynomial p with g - p small
  std::string residual;             // leading scale of g - p, "" if none
  std::string reason;
  std::optional<WeylResult> weyl;       // empirical evidence
  std::optional<ComplexTrace> cesaro;   // empirical evidence
};

/// Symbolic decision on a normal form; nullopt if rationality of a
/// polynomial coefficient is unknown.
std::optional<BoshResult> boshernitzan_symbolic(const NormalForm& g);

struct BoshOptions {
  std::int64_t N = 100000;  // horizon of the empirical fallback
  int m_max = 5;
  Tolerances tol{};
  int jobs = 1;
  bool evidence = true;     // Weyl traces alongside a symbolic verdict
};

BoshResult boshernitzan_trichotomy(const HardyExpr& g, const BoshOptions& opt = {});

enum class QStatus { Pass, Fail, Inconclusive };
const char* q_status_name(QStatus s);

enum class QOverall { Holds, Fails, EmpiricalOnly };
const char* q_overall_name(QOverall o);

enum class QRoute {
  MlMembership,          // t^l ln t < g < t^(l+1)
  IrrationalLeadingPower,// sum c_j t^a_j, integer leading degree, irrational c_0
  DegeneratePeriodic,    // g = rational polynomial + o(1)
  NotEquidistributed,    // first Weyl sum condition fails
  DifferenceWitness,     // t^l < g <~ t^l ln t: the l-th difference diverges
  ShiftCombinations,     // every enumerated combination checked symbolically
  Empirical,
};
const char* q_route_name(QRoute r);

struct TupleCheck {
  std::vector<long long> m;
  std::string symbolic;  // trichotomy verdict of the combination, "" if not decided
  bool converges_symbolic = false;
  bool traced = false;
  TraceSummary trace;
};

struct QOptions {
  int k_max = 2;
  int m_bound = 2;
  std::int64_t N = 100000;
  bool trace_tuples = true;  // Cesaro traces for every tuple, not only the witness
  Tolerances tol{};
  int jobs = 1;
};

struct QVerdict {
  QStatus q1 = QStatus::Inconclusive;
  QOverall overall = QOverall::EmpiricalOnly;
  QRoute route = QRoute::Empirical;
  bool empirical_pass = false;
  std::optional<std::vector<long long>> witness;
  std::optional<ComplexTrace> witness_trace;
  std::vector<TupleCheck> tuples;
  std::optional<WeylResult> weyl;
  std::optional<BoshResult> bosh;
  std::string note;
  QOptions options;
};

/// Tuples (m_0..m_k), 1 <= k <= k_max, m_0 != 0, m_k > 0, sum |m_j| <= m_bound,
/// ordered by (k, sum |m_j|) and then lexicographically.
std::vector<std::vector<long long>> q_tuples(int k_max, int m_bound);

/// Throws GuardExceeded if k_max > 4 or m_bound > 3.
QVerdict q_test(const WeightSpec& spec, const QOptions& opt = {});

/// N^-1 sum c_n e(theta a_n) at the checkpoints; a[n-1] = a_n.
ComplexTrace scalar_weighted_average(const WeightSpec& spec, const std::vector<std::int64_t>& a,
                                     const HardyExpr& theta, std::int64_t N,
                                     const std::vector<std::int64_t>& checkpoints = {}, const Tolerances& tol = {},
                                     int jobs = 1);

/// Reduction of a power sum whose leading term c t^l has rational c = u/v:
/// for n = q j + b with q = v, e(c n^l) = e(c b^l) is constant on the class.
struct ProgressionSplit {
  std::int64_t modulus = 1;
  std::vector<double> class_phase;  // c b^l mod 1 for b = 0..q-1
  HardyExpr leading;                // c t^l
  HardyExpr rest;                   // g - c t^l
};
std::optional<ProgressionSplit> split_rational_leading(const HardyExpr& g);

}  // namespace ergolab
