#include "ergolab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <thread>

#include "ergolab/errors.hpp"
#include "ergolab/growth.hpp"
#include "ergolab/index_set.hpp"

namespace ergolab {
namespace {

constexpr unsigned kFloorTermBits = 256;

// Runs fn(lo, hi) over [1, N] split into `jobs` contiguous ranges.
void parallel_ranges(std::int64_t N, int jobs, const std::function<void(std::int64_t, std::int64_t)>& fn) {
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(std::min<std::int64_t>(N / 4096 + 1, 64))));
  if (jobs == 1) {
    fn(1, N + 1);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
  const std::int64_t chunk = (N + jobs - 1) / jobs;
  for (int j = 0; j < jobs; ++j) {
    std::int64_t lo = 1 + j * chunk;
    std::int64_t hi = std::min(N + 1, lo + chunk);
    pool.emplace_back([&, j, lo, hi] {
      try {
        if (lo < hi) fn(lo, hi);
      } catch (...) {
        errors[static_cast<std::size_t>(j)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

double reduce_unit(double x) {
  x -= std::floor(x);
  return x >= 1.0 ? 0.0 : x;
}

Tier frac_tier(const HardyExpr& g, const PrecisionPolicy& p, std::int64_t N, double tol) {
  CertifiedEvaluator probe(g, p);
  try {
    return probe.tier_for_frac(std::max(N, probe.threshold()), tol);
  } catch (const DomainError&) {
    return p.min_tier;
  }
}

bool is_integer_scale(const Scale& s) {
  return s.alpha.is_integer() && s.alpha.sign() > 0 && s.beta.is_zero() && s.gamma.is_zero();
}

const Scale kLogScale{Rational(0), Rational(1), Rational(0)};

std::vector<long long> difference_tuple(int l) {
  std::vector<long long> m(static_cast<std::size_t>(l + 1));
  long long binom = 1;
  for (int j = 0; j <= l; ++j) {
    m[static_cast<std::size_t>(j)] = ((l - j) % 2 ? -1 : 1) * binom;
    binom = binom * (l - j) / (j + 1);
  }
  return m;
}

std::string tuple_str(const std::vector<long long>& m) {
  std::string s = "(";
  for (std::size_t i = 0; i < m.size(); ++i) s += (i ? "," : "") + std::to_string(m[i]);
  return s + ")";
}

ComplexTrace tuple_trace(const PhaseSequence& ph, const std::vector<long long>& m, std::int64_t N,
                         const std::vector<std::int64_t>& cps, const Tolerances& tol) {
  std::vector<std::complex<double>> z(static_cast<std::size_t>(N));
  for (std::int64_t n = 1; n <= N; ++n) {
    double x = 0;
    for (std::size_t j = 0; j < m.size(); ++j)
      x = reduce_unit(x + static_cast<double>(m[j]) * ph.phase[static_cast<std::size_t>(n - 1) + j]);
    z[static_cast<std::size_t>(n - 1)] = unit(x);
  }
  return cesaro_trace(z, cps, tol);
}

}  // namespace

WeightSpec WeightSpec::hardy(HardyExpr g) {
  WeightSpec s;
  s.g_ = std::move(g);
  return s;
}

WeightSpec WeightSpec::generalized(HardyExpr q, std::vector<FloorTerm> terms) {
  for (const auto& t : terms) require(t.alpha.is_constant(), "floor term coefficient must be a constant");
  WeightSpec s;
  s.g_ = std::move(q);
  s.terms_ = std::move(terms);
  return s;
}

WeightSpec WeightSpec::parse(std::string_view text) {
  if (text.rfind("gp:", 0) != 0) return hardy(HardyExpr::parse(text));
  std::string body(text.substr(3));
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = body.find(';', pos);
    parts.push_back(body.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  HardyExpr q = HardyExpr::parse(parts[0]);
  std::vector<FloorTerm> terms;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    std::size_t colon = parts[i].find(':');
    if (colon == std::string::npos) throw ParseError("floor term must read alpha:p", 0);
    HardyExpr alpha = HardyExpr::parse(parts[i].substr(0, colon));
    if (!alpha.is_constant()) throw ParseError("floor term coefficient must be a constant", 0);
    terms.push_back({alpha, HardyExpr::parse(parts[i].substr(colon + 1))});
  }
  return generalized(std::move(q), std::move(terms));
}

bool WeightSpec::is_trivial() const {
  auto q = g_.as_rational();
  return terms_.empty() && q && q->is_integer();
}

std::string WeightSpec::str() const {
  if (terms_.empty()) return g_.str();
  std::string s = "gp:" + g_.str();
  for (const auto& t : terms_) s += ";" + t.alpha.str() + ":" + t.p.str();
  return s;
}

PhaseSequence phases(const WeightSpec& spec, std::int64_t N, int jobs) {
  require(N >= 1, "phases: N must be >= 1");
  PhaseSequence out;
  out.phase.assign(static_cast<std::size_t>(N), 0.0);
  if (spec.is_trivial()) return out;

  PrecisionPolicy policy = spec.precision;
  const HardyExpr& q = spec.g();
  std::optional<CertifiedEvaluator> ev;
  if (!(q.is_constant() && q.as_rational() && q.as_rational()->is_zero())) {
    policy.min_tier = frac_tier(q, spec.precision, N, spec.phase_tol);
    ev.emplace(q, policy);
    out.tier = policy.min_tier;
  }
  struct FloorEval {
    CertifiedEvaluator p;
    MpReal alpha;
  };
  std::vector<FloorEval> floors;
  for (const auto& t : spec.floor_terms()) {
    auto a = eval_approx<MpReal>(t.alpha, MpReal(kFloorTermBits), std::nullopt, kFloorTermBits);
    floors.push_back({CertifiedEvaluator(t.p, spec.precision), a.value});
  }
  std::vector<std::int64_t> undefined_per_range;
  std::mutex mu;
  parallel_ranges(N, jobs, [&](std::int64_t lo, std::int64_t hi) {
    std::vector<TierHint> hints(floors.size(), TierHint{spec.precision.min_tier, 0});
    MpReal prod(kFloorTermBits);
    std::int64_t undefined = 0;
    for (std::int64_t n = lo; n < hi; ++n) {
      double x = 0;
      try {
        if (ev) x = ev->frac_at(n, spec.phase_tol);
        for (std::size_t i = 0; i < floors.size(); ++i) {
          std::int64_t F = floors[i].p.floor_at(n, &hints[i]);
          mpfr_mul_si(prod.raw(), floors[i].alpha.raw(), static_cast<long>(F), MPFR_RNDN);
          mpfr_frac(prod.raw(), prod.raw(), MPFR_RNDN);
          x += static_cast<double>(mpfr_get_d(prod.raw(), MPFR_RNDN));
        }
      } catch (const PrecisionExhausted&) {
        throw;
      } catch (const DomainError&) {
        ++undefined;
        x = 0;
      }
      out.phase[static_cast<std::size_t>(n - 1)] = reduce_unit(x);
    }
    std::lock_guard<std::mutex> lock(mu);
    out.undefined += undefined;
  });
  out.max_err = spec.phase_tol * static_cast<double>(1 + floors.size()) + 1e-15;
  return out;
}

std::vector<std::complex<double>> weights(const WeightSpec& spec, std::int64_t N, int jobs) {
  auto ph = phases(spec, N, jobs);
  std::vector<std::complex<double>> c(ph.phase.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = unit(ph.phase[i]);
  return c;
}

double rotation_phase(double base, Quad theta_frac, std::int64_t a) {
  Quad x = theta_frac * static_cast<Quad>(a);
  x -= floorq(x);
  return reduce_unit(base + static_cast<double>(x));
}

std::vector<std::int64_t> default_checkpoints(std::int64_t N) {
  return geometric_checkpoints(N >= 1000 ? 100 : 1, N, 4);
}

ComplexTrace cesaro_trace(const std::vector<std::complex<double>>& z, const std::vector<std::int64_t>& checkpoints,
                          const Tolerances& tol) {
  require(!checkpoints.empty(), "trace: empty checkpoint schedule");
  require(checkpoints.back() <= static_cast<std::int64_t>(z.size()), "trace: sequence shorter than N");
  ComplexTrace t;
  t.checkpoints = checkpoints;
  CompensatedComplexSum sum;
  std::size_t next = 0;
  for (std::int64_t n = 1; n <= checkpoints.back(); ++n) {
    sum.add(z[static_cast<std::size_t>(n - 1)]);
    while (next < checkpoints.size() && checkpoints[next] == n) {
      t.values.push_back(sum.value() / static_cast<double>(n));
      ++next;
    }
  }
  if (t.checkpoints.size() >= 10) t.summary = summarize(t.checkpoints, t.values, tol);
  return t;
}

WeylResult weyl_from_phases(const PhaseSequence& ph, std::int64_t N, int m_max,
                            const std::vector<std::int64_t>& checkpoints, const Tolerances& tol) {
  require(m_max >= 1, "weyl_test: m_max must be >= 1");
  WeylResult r;
  r.N = N;
  r.m_max = m_max;
  r.tol = tol;
  r.phase_err = ph.max_err * m_max;
  const auto cps = checkpoints.empty() ? default_checkpoints(N) : checkpoints;
  r.pass = true;
  std::vector<std::complex<double>> z(static_cast<std::size_t>(N));
  for (int m = 1; m <= m_max; ++m) {
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = unit(reduce_unit(m * ph.phase[i]));
    r.traces.push_back(cesaro_trace(z, cps, tol));
    r.pass = r.pass && r.traces.back().summary.verdict == Verdict::ConvergesToZero;
  }
  return r;
}

WeylResult weyl_test(const WeightSpec& spec, std::int64_t N, int m_max, const std::vector<std::int64_t>& checkpoints,
                     const Tolerances& tol, int jobs) {
  return weyl_from_phases(phases(spec, N, jobs), N, m_max, checkpoints, tol);
}

const char* bosh_verdict_name(BoshVerdict v) {
  switch (v) {
    case BoshVerdict::Equidistributed: return "equidistributed";
    case BoshVerdict::CesaroDegenerate: return "cesaro-converges-degenerate";
    case BoshVerdict::Diverges: return "diverges";
    case BoshVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

std::optional<BoshResult> boshernitzan_symbolic(const NormalForm& g) {
  BoshResult r;
  r.symbolic = true;
  NormalForm poly, rest;
  for (const auto& [s, c] : g.terms()) {
    if (is_integer_scale(s))
      poly = poly + NormalForm::term(c, s);
    else
      rest = rest + NormalForm::term(c, s);
  }
  for (const auto& [s, c] : poly.terms()) {
    switch (c.rationality()) {
      case Rationality::Irrational:
        r.verdict = BoshVerdict::Equidistributed;
        r.dense = true;
        r.reason = "irrational coefficient at t^" + s.alpha.str();
        return r;
      case Rationality::Unknown:
        return std::nullopt;
      case Rationality::Rational:
        break;
    }
  }
  NormalForm residual;
  Coef constant = Coef::rational(0);
  const NormalForm kept = rest.without_vanishing();
  for (const auto& [s, c] : kept.terms()) {
    if (s == kConstantScale)
      constant = c;
    else
      residual = residual + NormalForm::term(c, s);
  }
  if (residual.is_zero()) {
    r.verdict = BoshVerdict::CesaroDegenerate;
    NormalForm w = poly;
    if (constant.rationality() == Rationality::Rational) w = w + NormalForm::constant(constant);
    r.witness = w.to_expr();
    r.reason = "g is a rational polynomial up to a constant and o(1)";
    return r;
  }
  const Scale tau = residual.leading().first;
  r.residual = tau.str();
  if (kLogScale < tau) {
    r.verdict = BoshVerdict::Equidistributed;
    r.dense = true;
    r.reason = "g minus its rational polynomial part grows faster than ln t";
    return r;
  }
  r.verdict = BoshVerdict::Diverges;
  r.dense = true;
  r.witness = poly.to_expr();
  r.reason = "g minus a rational polynomial tends to infinity no faster than ln t";
  return r;
}

BoshResult boshernitzan_trichotomy(const HardyExpr& g, const BoshOptions& opt) {
  if (auto nf = NormalForm::from_expr(g)) {
    if (auto r = boshernitzan_symbolic(*nf)) {
      if (opt.evidence && opt.N > 0) {
        r->weyl = weyl_test(WeightSpec::hardy(g), opt.N, opt.m_max, default_checkpoints(opt.N), opt.tol, opt.jobs);
        r->cesaro = r->weyl->traces.front();
      }
      return *r;
    }
  }
  BoshResult r;
  r.symbolic = false;
  auto ph = phases(WeightSpec::hardy(g), opt.N, opt.jobs);
  const auto cps = default_checkpoints(opt.N);
  r.weyl = weyl_from_phases(ph, opt.N, opt.m_max, cps, opt.tol);
  r.cesaro = r.weyl->traces.front();
  if (r.weyl->pass) {
    r.verdict = BoshVerdict::Equidistributed;
    r.reason = "empirical: Weyl sums below tolerance for m <= " + std::to_string(opt.m_max);
  } else {
    switch (r.cesaro->summary.verdict) {
      case Verdict::ConvergesToZero:
      case Verdict::ConvergesNonzero:
        r.verdict = BoshVerdict::CesaroDegenerate;
        r.reason = "empirical: Cesaro trace settles but a Weyl sum does not vanish";
        break;
      case Verdict::Diverges:
        r.verdict = BoshVerdict::Diverges;
        r.reason = "empirical: Cesaro trace oscillates";
        break;
      case Verdict::Inconclusive:
        r.verdict = BoshVerdict::Inconclusive;
        r.reason = "empirical: trace oscillation between tolerances";
        break;
    }
  }
  return r;
}

const char* q_status_name(QStatus s) {
  switch (s) {
    case QStatus::Pass: return "pass";
    case QStatus::Fail: return "fail";
    case QStatus::Inconclusive: return "inconclusive";
  }
  return "?";
}

const char* q_overall_name(QOverall o) {
  switch (o) {
    case QOverall::Holds: return "Q-holds";
    case QOverall::Fails: return "Q-fails";
    case QOverall::EmpiricalOnly: return "empirical-only";
  }
  return "?";
}

const char* q_route_name(QRoute r) {
  switch (r) {
    case QRoute::MlMembership: return "M_l-membership";
    case QRoute::IrrationalLeadingPower: return "irrational-leading-power-sum";
    case QRoute::DegeneratePeriodic: return "degenerate-periodic";
    case QRoute::NotEquidistributed: return "not-equidistributed";
    case QRoute::DifferenceWitness: return "derivative-difference-witness";
    case QRoute::ShiftCombinations: return "shift-combinations";
    case QRoute::Empirical: return "empirical";
  }
  return "?";
}

std::vector<std::vector<long long>> q_tuples(int k_max, int m_bound) {
  std::vector<std::vector<long long>> out;
  for (int k = 1; k <= k_max; ++k) {
    for (int total = 2; total <= m_bound; ++total) {
      std::vector<std::vector<long long>> level;
      std::vector<long long> m(static_cast<std::size_t>(k + 1), 0);
      std::function<void(int, int)> rec = [&](int j, int left) {
        if (j == k) {
          if (left > 0) {
            m[static_cast<std::size_t>(k)] = left;
            if (m[0] != 0) level.push_back(m);
          }
          return;
        }
        for (int v = -left; v <= left; ++v) {
          if (j == 0 && v == 0) continue;
          m[static_cast<std::size_t>(j)] = v;
          rec(j + 1, left - std::abs(v));
        }
        m[static_cast<std::size_t>(j)] = 0;
      };
      rec(0, total);
      std::sort(level.begin(), level.end());
      out.insert(out.end(), level.begin(), level.end());
    }
  }
  return out;
}

QVerdict q_test(const WeightSpec& spec, const QOptions& opt) {
  if (opt.k_max < 1 || opt.k_max > 4 || opt.m_bound < 2 || opt.m_bound > 3)
    throw GuardExceeded("q_test: need 1 <= k_max <= 4 and 2 <= m_bound <= 3");
  QVerdict v;
  v.options = opt;
  const auto tuples = q_tuples(opt.k_max, opt.m_bound);

  std::optional<PhaseSequence> ph;
  std::vector<std::int64_t> cps;
  if (opt.N > 0) {
    ph = phases(spec, opt.N + opt.k_max, opt.jobs);
    cps = default_checkpoints(opt.N);
    PhaseSequence head = *ph;
    head.phase.resize(static_cast<std::size_t>(opt.N));
    v.weyl = weyl_from_phases(head, opt.N, 5, cps, opt.tol);
  }
  auto trace_of = [&](const std::vector<long long>& m) { return tuple_trace(*ph, m, opt.N, cps, opt.tol); };
  auto attach_traces = [&]() {
    if (!ph) return;
    for (auto& t : v.tuples) {
      if (!opt.trace_tuples && !(v.witness && t.m == *v.witness)) continue;
      t.trace = trace_of(t.m).summary;
      t.traced = true;
    }
    if (v.witness) v.witness_trace = trace_of(*v.witness);
  };
  auto empirical = [&](const std::string& note) {
    v.route = QRoute::Empirical;
    v.overall = QOverall::EmpiricalOnly;
    v.note = note;
    if (!ph) return v;
    v.q1 = v.weyl->pass ? QStatus::Pass : QStatus::Fail;
    bool all_converge = true;
    for (auto& t : v.tuples) {
      t.trace = trace_of(t.m).summary;
      t.traced = true;
      bool conv = t.trace.verdict == Verdict::ConvergesToZero || t.trace.verdict == Verdict::ConvergesNonzero;
      all_converge = all_converge && conv;
      if (t.trace.verdict == Verdict::Diverges && !v.witness) v.witness = t.m;
    }
    if (v.witness) v.witness_trace = trace_of(*v.witness);
    v.empirical_pass = v.q1 == QStatus::Pass && all_converge;
    return v;
  };

  for (const auto& m : tuples) v.tuples.push_back(TupleCheck{m, "", false, false, {}});
  if (!spec.is_hardy()) return empirical("generalized polynomial weights have no symbolic route");
  auto nf0 = NormalForm::from_expr(spec.g());
  if (!nf0 || nf0->is_zero()) return empirical("expression outside the symbolic subclass");
  NormalForm nf = nf0->leading().second.sign() < 0 ? -*nf0 : *nf0;
  auto bosh = boshernitzan_symbolic(nf);
  if (!bosh) return empirical("rationality of a polynomial coefficient is unknown");
  v.bosh = bosh;

  if (bosh->verdict != BoshVerdict::Equidistributed) {
    v.q1 = QStatus::Fail;
    v.overall = QOverall::Fails;
    v.route = bosh->verdict == BoshVerdict::CesaroDegenerate ? QRoute::DegeneratePeriodic : QRoute::NotEquidistributed;
    v.note = bosh->verdict == BoshVerdict::CesaroDegenerate
                 ? "weights are periodic up to o(1); the first condition fails although weighted averages "
                   "converge along arithmetic progressions"
                 : "(e(g(n))) is not equidistributed: " + bosh->reason;
    attach_traces();
    return v;
  }
  v.q1 = QStatus::Pass;

  const HardyExpr g_pos = nf.to_expr();
  GrowthClass ml = classify_Ml(g_pos);
  if (ml.verdict == GrowthVerdict::Ml && ml.symbolic) {
    v.overall = QOverall::Holds;
    v.route = QRoute::MlMembership;
    v.note = "g in M_" + std::to_string(ml.index);
    attach_traces();
    return v;
  }

  auto [lead_scale, lead_coef] = nf.leading();
  bool power_sum = std::all_of(nf.terms().begin(), nf.terms().end(), [](const auto& kv) {
    return kv.first.beta.is_zero() && kv.first.gamma.is_zero();
  });
  if (power_sum && is_integer_scale(lead_scale) && lead_coef.rationality() == Rationality::Irrational) {
    v.overall = QOverall::Holds;
    v.route = QRoute::IrrationalLeadingPower;
    v.note = "power sum with irrational leading coefficient at t^" + lead_scale.alpha.str();
    attach_traces();
    return v;
  }

  auto combination_verdict = [&](const std::vector<long long>& m) -> std::optional<BoshResult> {
    auto comb = nf.shift_combination(m);
    if (!comb) return std::nullopt;
    return boshernitzan_symbolic(*comb);
  };

  const Scale log_part{Rational(0), lead_scale.beta, lead_scale.gamma};
  if (lead_scale.alpha.is_integer() && lead_scale.alpha.sign() > 0 && kConstantScale < log_part &&
      !(kLogScale < log_part) && lead_scale.alpha.num() <= 8) {
    auto m = difference_tuple(static_cast<int>(lead_scale.alpha.num()));
    auto r = combination_verdict(m);
    if (r && r->verdict == BoshVerdict::Diverges) {
      v.overall = QOverall::Fails;
      v.route = QRoute::DifferenceWitness;
      v.witness = m;
      v.note = "the difference " + tuple_str(m) + " equals g^(l)(t) + o(1), which grows at most like ln t";
      attach_traces();
      return v;
    }
  }

  bool undecided = false;
  for (auto& t : v.tuples) {
    auto r = combination_verdict(t.m);
    if (!r) {
      undecided = true;
      continue;
    }
    t.symbolic = bosh_verdict_name(r->verdict);
    t.converges_symbolic = r->verdict != BoshVerdict::Diverges;
    if (!t.converges_symbolic && !v.witness) v.witness = t.m;
  }
  if (v.witness) {
    v.overall = QOverall::Fails;
    v.route = QRoute::ShiftCombinations;
    v.note = "combination " + tuple_str(*v.witness) + " is not Cesaro convergent";
    attach_traces();
    return v;
  }
  if (!undecided) {
    v.overall = QOverall::Holds;
    v.route = QRoute::ShiftCombinations;
    v.note = "every combination with k <= " + std::to_string(opt.k_max) + " and sum |m_j| <= " +
             std::to_string(opt.m_bound) + " is Cesaro convergent";
    attach_traces();
    return v;
  }
  return empirical("some shift combinations left the symbolic subclass");
}

ComplexTrace scalar_weighted_average(const WeightSpec& spec, const std::vector<std::int64_t>& a,
                                     const HardyExpr& theta, std::int64_t N,
                                     const std::vector<std::int64_t>& checkpoints, const Tolerances& tol, int jobs) {
  require(theta.is_constant(), "lambda phase must be a constant");
  require(N >= 1 && static_cast<std::int64_t>(a.size()) >= N, "scalar average: sequence shorter than N");
  auto th = eval_approx<Quad>(theta, static_cast<Quad>(0), std::nullopt, 113);
  Quad t = th.value - floorq(th.value);
  auto ph = phases(spec, N, jobs);
  std::vector<std::complex<double>> z(static_cast<std::size_t>(N));
  for (std::int64_t n = 1; n <= N; ++n) {
    auto i = static_cast<std::size_t>(n - 1);
    z[i] = unit(rotation_phase(ph.phase[i], t, a[i]));
  }
  return cesaro_trace(z, checkpoints.empty() ? default_checkpoints(N) : checkpoints, tol);
}

std::optional<ProgressionSplit> split_rational_leading(const HardyExpr& g) {
  auto nf = NormalForm::from_expr(g);
  if (!nf || nf->is_zero()) return std::nullopt;
  auto [s, c] = nf->leading();
  auto q = c.as_rational();
  if (!is_integer_scale(s) || !q || c.rationality() != Rationality::Rational) return std::nullopt;
  const std::int64_t l = s.alpha.num();
  const std::int64_t v = q->den();
  if (v > (std::int64_t{1} << 20)) return std::nullopt;
  ProgressionSplit out;
  out.modulus = v;
  out.leading = HardyExpr::constant(*q) * pow(HardyExpr::var(), Rational(l));
  out.rest = (*nf - NormalForm::term(c, s)).to_expr();
  const auto u = static_cast<__int128>(((q->num() % v) + v) % v);
  for (std::int64_t b = 0; b < v; ++b) {
    __int128 pw = 1;
    for (std::int64_t i = 0; i < l; ++i) pw = (pw * b) % v;
    out.class_phase.push_back(static_cast<double>(static_cast<std::int64_t>((u * pw) % v)) / static_cast<double>(v));
  }
  return out;
}

}  // namespace ergolab
