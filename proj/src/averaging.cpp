#include "ergolab/averaging.hpp"

#include <mpfr.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include "ergolab/errors.hpp"

namespace ergolab {
namespace {

using i128 = __int128;

// Correctly rounded num / den.
double ratio_to_double(i128 num, i128 den) {
  auto to_mpz = [](mpz_t z, i128 v) {
    const bool neg = v < 0;
    auto u = static_cast<unsigned __int128>(neg ? -v : v);
    const std::uint64_t limbs[2] = {static_cast<std::uint64_t>(u), static_cast<std::uint64_t>(u >> 64)};
    mpz_import(z, 2, -1, sizeof(std::uint64_t), 0, 0, limbs);
    if (neg) mpz_neg(z, z);
  };
  mpq_t q;
  mpq_init(q);
  to_mpz(mpq_numref(q), num);
  to_mpz(mpq_denref(q), den);
  mpq_canonicalize(q);
  mpfr_t f;
  mpfr_init2(f, 53);
  mpfr_set_q(f, q, MPFR_RNDN);
  const double d = mpfr_get_d(f, MPFR_RNDN);
  mpfr_clear(f);
  mpq_clear(q);
  return d;
}

// Integer form of a rational vector: p_i = x_i * D.
struct IntegerVector {
  std::vector<std::int64_t> p;
  std::int64_t D = 1;
};

std::optional<IntegerVector> integer_form(const VectorModel& x) {
  if (!x.exact()) return std::nullopt;
  IntegerVector v;
  for (const auto& c : *x.exact()) {
    const std::int64_t g = std::gcd(v.D, c.den());
    if (v.D / g > (std::int64_t{1} << 31) / c.den()) return std::nullopt;
    v.D = v.D / g * c.den();
  }
  for (const auto& c : *x.exact()) {
    const i128 p = static_cast<i128>(c.num()) * (v.D / c.den());
    if (p > (std::int64_t{1} << 40) || p < -(std::int64_t{1} << 40)) return std::nullopt;
    v.p.push_back(static_cast<std::int64_t>(p));
  }
  return v;
}

// Terms entering an average, after the index set is applied.
struct Terms {
  std::vector<std::int64_t> exps;      // exponent per sequence index (n = 1..horizon)
  std::vector<std::uint8_t> include;   // empty: every index
  std::vector<double> phase;           // empty: c_n = 1
  std::vector<std::int64_t> checkpoints;
  std::int64_t flagged = 0;
};

bool included(const Terms& t, std::size_t i) { return t.include.empty() || t.include[i]; }

std::vector<std::int64_t> clip_schedule(std::vector<std::int64_t> cps, std::int64_t horizon) {
  cps.erase(std::remove_if(cps.begin(), cps.end(), [&](std::int64_t c) { return c > horizon; }), cps.end());
  if (cps.empty() || cps.back() != horizon) cps.push_back(horizon);
  return cps;
}

void finish(AverageTrace& tr, const Tolerances& tol) {
  tr.tol = tol;
  for (std::size_t i = 0; i < tr.points.size(); ++i) {
    double lo = tr.points[i].norm2, hi = lo;
    for (std::size_t j = 0; j <= i; ++j) {
      if (10 * tr.points[j].N < tr.points[i].N) continue;
      lo = std::min(lo, tr.points[j].norm2);
      hi = std::max(hi, tr.points[j].norm2);
    }
    tr.points[i].osc = hi - lo;
  }
  if (tr.points.size() >= 10) tr.summary = verdict(tr, tol);
}

// Shift kinds: ||sum_v W(v) T^v x||^2 grows by |c|^2 G(v,v) + 2 Re(c sum_w conj(W(w)) G(v,w))
// when c is added at v; only |v - w| < width contributes.
AverageTrace accumulate_shift(const OperatorModel& model, const VectorModel& x, const Terms& t) {
  AverageTrace tr;
  tr.method = "gram-buckets";
  const std::int64_t s = x.width();
  const std::int64_t period = model.kind() == ModelKind::SimilarShift ? static_cast<std::int64_t>(model.pattern().size()) : 1;
  const std::int64_t base = period * (s / period + 2);
  // G[res][diff + s - 1] = <T^v x, T^(v-diff) x> for v = res mod period.
  std::vector<std::vector<double>> G(static_cast<std::size_t>(period), std::vector<double>(static_cast<std::size_t>(2 * s - 1)));
  for (std::int64_t r = 0; r < period; ++r)
    for (std::int64_t diff = -(s - 1); diff <= s - 1; ++diff)
      G[static_cast<std::size_t>(r)][static_cast<std::size_t>(diff + s - 1)] =
          model.gram(x, base + r, base + r - diff).real();
  auto g_at = [&](std::int64_t v, std::int64_t diff) {
    return G[static_cast<std::size_t>(v % period)][static_cast<std::size_t>(diff + s - 1)];
  };
  const double xn2 = x.norm2();

  const bool exact = model.kind() == ModelKind::BilateralShift && t.phase.empty();
  std::optional<IntegerVector> iv = exact ? integer_form(x) : std::nullopt;
  std::vector<i128> R;
  if (iv) {
    R.assign(static_cast<std::size_t>(2 * s - 1), 0);
    for (std::int64_t diff = -(s - 1); diff <= s - 1; ++diff)
      for (std::int64_t i = std::max<std::int64_t>(0, -diff); i < s && i + diff < s; ++i)
        R[static_cast<std::size_t>(diff + s - 1)] +=
            static_cast<i128>(iv->p[static_cast<std::size_t>(i)]) * iv->p[static_cast<std::size_t>(i + diff)];
  }
  tr.exact = iv.has_value();

  std::unordered_map<std::int64_t, std::complex<double>> W;
  std::unordered_map<std::int64_t, std::int64_t> Wc;
  W.reserve(t.exps.size());
  CompensatedSum S;
  i128 Sx = 0;
  CompensatedComplexSum V;
  std::int64_t n_eff = 0;
  std::size_t next = 0;
  for (std::size_t i = 0; i < t.exps.size() && next < t.checkpoints.size(); ++i) {
    if (included(t, i)) {
      ++n_eff;
      const std::int64_t v = t.exps[i];
      if (iv) {
        i128 cross = 0;
        for (std::int64_t w = v - s + 1; w <= v + s - 1; ++w) {
          auto it = Wc.find(w);
          if (it != Wc.end()) cross += static_cast<i128>(it->second) * R[static_cast<std::size_t>(v - w + s - 1)];
        }
        Sx += R[static_cast<std::size_t>(s - 1)] + 2 * cross;
        ++Wc[v];
        if (v < s) V.add(static_cast<double>(R[static_cast<std::size_t>(v + s - 1)]) /
                         static_cast<double>(R[static_cast<std::size_t>(s - 1)]));
      } else {
        const std::complex<double> c = t.phase.empty() ? 1.0 : unit(t.phase[i]);
        std::complex<double> cross = 0;
        for (std::int64_t w = v - s + 1; w <= v + s - 1; ++w) {
          auto it = W.find(w);
          if (it != W.end()) cross += std::conj(it->second) * g_at(v, v - w);
        }
        S.add(std::norm(c) * g_at(v, 0) + 2 * (c * cross).real());
        W[v] += c;
        if (v < s) V.add(c * model.gram(x, v, 0) / xn2);
      }
    }
    const auto n = static_cast<std::int64_t>(i + 1);
    while (next < t.checkpoints.size() && t.checkpoints[next] == n) {
      TracePoint p;
      p.N = n;
      p.N_eff = n_eff;
      if (n_eff > 0) {
        const double ne = static_cast<double>(n_eff);
        p.value = V.value() / ne;
        if (iv) {
          const i128 D2 = static_cast<i128>(iv->D) * iv->D;
          p.norm2 = ratio_to_double(Sx, D2 * n_eff * n_eff);
        } else {
          p.norm2 = std::max(0.0, S.value()) / (ne * ne);
        }
      }
      tr.points.push_back(p);
      ++next;
    }
  }
  return tr;
}

AverageTrace accumulate_diagonal(const OperatorModel& model, const VectorModel& x, const Terms& t) {
  model.check_vector(x);
  AverageTrace tr;
  tr.method = "diagonal";
  struct Coord {
    const DiagonalEntry* e;
    double w;  // x_i^2
    CompensatedComplexSum sum;
  };
  std::vector<Coord> coords;
  for (std::int64_t i = 0; i < x.width(); ++i) {
    const double c = x.coefficients()[static_cast<std::size_t>(i)];
    if (c != 0) coords.push_back({&model.entries()[static_cast<std::size_t>(x.offset() + i)], c * c, {}});
  }
  const double xn2 = x.norm2();
  std::int64_t n_eff = 0;
  std::size_t next = 0;
  for (std::size_t i = 0; i < t.exps.size() && next < t.checkpoints.size(); ++i) {
    if (included(t, i)) {
      ++n_eff;
      const double base = t.phase.empty() ? 0.0 : t.phase[i];
      for (auto& c : coords) {
        std::complex<double> z = unit(rotation_phase(base, c.e->phase_frac, t.exps[i]));
        if (c.e->modulus != Rational(1)) z *= std::pow(c.e->modulus.to_double(), static_cast<double>(t.exps[i]));
        c.sum.add(z);
      }
    }
    const auto n = static_cast<std::int64_t>(i + 1);
    while (next < t.checkpoints.size() && t.checkpoints[next] == n) {
      TracePoint p;
      p.N = n;
      p.N_eff = n_eff;
      if (n_eff > 0) {
        std::complex<double> value = 0;
        for (const auto& c : coords) {
          const std::complex<double> avg = c.sum.value() / static_cast<double>(n_eff);
          p.norm2 += c.w * std::norm(avg);
          value += c.w * avg;
        }
        p.value = value / xn2;
      }
      tr.points.push_back(p);
      ++next;
    }
  }
  return tr;
}

AverageTrace accumulate_matrix(const OperatorModel& model, const VectorModel& x, const Terms& t) {
  model.check_vector(x);
  using Mat = Eigen::MatrixXd;
  using Vec = Eigen::VectorXd;
  AverageTrace tr;
  tr.method = "matrix";
  const std::int64_t dim = model.dimension();
  Mat T(dim, dim);
  for (std::int64_t r = 0; r < dim; ++r)
    for (std::int64_t c = 0; c < dim; ++c) T(r, c) = model.matrix_entries()[static_cast<std::size_t>(r * dim + c)];
  Vec x0 = Vec::Zero(dim);
  for (std::int64_t i = 0; i < x.width(); ++i) x0(x.offset() + i) = x.coefficients()[static_cast<std::size_t>(i)];
  std::vector<Mat> pow2{T};  // T^(2^k)
  std::vector<CompensatedComplexSum> sum(static_cast<std::size_t>(dim));
  std::int64_t n_eff = 0;
  std::size_t next = 0;
  for (std::size_t i = 0; i < t.exps.size() && next < t.checkpoints.size(); ++i) {
    if (included(t, i)) {
      ++n_eff;
      Vec y = x0;
      std::uint64_t e = static_cast<std::uint64_t>(t.exps[i]);
      for (std::size_t k = 0; e; ++k, e >>= 1) {
        if (k == pow2.size()) pow2.push_back(pow2.back() * pow2.back());
        if (e & 1) y = pow2[k] * y;
      }
      const std::complex<double> c = t.phase.empty() ? 1.0 : unit(t.phase[i]);
      for (std::int64_t j = 0; j < dim; ++j) sum[static_cast<std::size_t>(j)].add(c * y(j));
    }
    const auto n = static_cast<std::int64_t>(i + 1);
    while (next < t.checkpoints.size() && t.checkpoints[next] == n) {
      TracePoint p;
      p.N = n;
      p.N_eff = n_eff;
      if (n_eff > 0) {
        std::complex<double> value = 0;
        for (std::int64_t j = 0; j < dim; ++j) {
          const std::complex<double> yj = sum[static_cast<std::size_t>(j)].value() / static_cast<double>(n_eff);
          p.norm2 += std::norm(yj);
          value += yj * x0(j);
        }
        p.value = value / x.norm2();
      }
      tr.points.push_back(p);
      ++next;
    }
  }
  return tr;
}

AverageTrace accumulate(const OperatorModel& model, const VectorModel& x, const Terms& t) {
  if (model.is_shift_kind()) return accumulate_shift(model, x, t);
  if (model.is_diagonal_kind()) return accumulate_diagonal(model, x, t);
  return accumulate_matrix(model, x, t);
}

// Sequence, index set and weights for the main average.
Terms main_terms(const ExperimentConfig& cfg, AverageTrace& tr, const GeneratedSequence* given = nullptr) {
  Terms t;
  GeneratedSequence gen = given ? *given : generate_a(cfg.seq, cfg.N, cfg.jobs);
  require(static_cast<std::int64_t>(gen.a.size()) >= cfg.N, "vector_average: sequence shorter than N");
  gen.a.resize(static_cast<std::size_t>(cfg.N));
  t.flagged = 0;
  for (std::int64_t i = 0; i < cfg.N; ++i) t.flagged += gen.flags.empty() ? 0 : gen.flags[static_cast<std::size_t>(i)] != 0;
  t.exps = cfg.dedup ? dedup_first(gen.a) : std::move(gen.a);
  const auto horizon = static_cast<std::int64_t>(t.exps.size());
  if (cfg.A.kind() != IndexSet::Kind::Natural) t.include = cfg.A.indicator(horizon);
  if (!cfg.weight.is_trivial()) t.phase = phases(cfg.weight, horizon, cfg.jobs).phase;
  t.checkpoints = clip_schedule(cfg.checkpoints, horizon);
  tr.horizon = horizon;
  return t;
}

}  // namespace

void ExperimentConfig::validate() {
  require(N >= 100, "experiment: N must be >= 100");
  if (checkpoints.empty()) checkpoints = geometric_checkpoints(std::min<std::int64_t>(100, N), N, 4);
  for (std::size_t i = 1; i < checkpoints.size(); ++i)
    require(checkpoints[i - 1] < checkpoints[i], "experiment: checkpoints must be strictly increasing");
  require(checkpoints.front() >= 1 && checkpoints.back() == N, "experiment: the last checkpoint must equal N");
  require(x.norm2() > 0, "experiment: the vector must be non-zero");
  model.check_vector(x);
  for (const auto& w : witnesses) {
    require(w.norm2() > 0, "experiment: witness vectors must be non-zero");
    model.check_vector(w);
  }
}

AverageTrace vector_average(const ExperimentConfig& input) {
  ExperimentConfig cfg = input;
  cfg.validate();
  auto gen = generate_a(cfg.seq, cfg.N, cfg.jobs);
  return vector_average(cfg, gen);
}

AverageTrace vector_average(const ExperimentConfig& input, const GeneratedSequence& seq) {
  ExperimentConfig cfg = input;
  cfg.validate();
  AverageTrace shell;
  Terms t = main_terms(cfg, shell, &seq);
  AverageTrace tr = accumulate(cfg.model, cfg.x, t);
  tr.horizon = shell.horizon;
  tr.flagged = t.flagged;
  tr.dedup = cfg.dedup;
  finish(tr, cfg.tol);
  return tr;
}

AverageTrace vector_average_materialized(const ExperimentConfig& input) {
  ExperimentConfig cfg = input;
  cfg.validate();
  if (!cfg.model.is_shift_kind()) throw Unsupported("materialized averages are implemented for shift models");
  AverageTrace tr;
  Terms t = main_terms(cfg, tr);
  tr.method = "materialized";
  tr.flagged = t.flagged;
  tr.dedup = cfg.dedup;
  const auto [lo_it, hi_it] = std::minmax_element(t.exps.begin(), t.exps.end());
  const std::int64_t lo = *lo_it + cfg.x.offset();
  const std::int64_t span = *hi_it - *lo_it + cfg.x.width();
  if (static_cast<double>(span) * static_cast<double>(t.checkpoints.size()) > 2e9)
    throw GuardExceeded("materialized average: coordinate range too large");
  const auto& c = cfg.x.coefficients();
  auto iv = cfg.model.kind() == ModelKind::BilateralShift && t.phase.empty() ? integer_form(cfg.x) : std::nullopt;
  tr.exact = iv.has_value();
  std::vector<std::complex<double>> Y(iv ? 0 : static_cast<std::size_t>(span));
  std::vector<i128> Yx(iv ? static_cast<std::size_t>(span) : 0);
  std::vector<double> dpat;
  if (cfg.model.kind() == ModelKind::SimilarShift)
    for (const auto& d : cfg.model.pattern()) dpat.push_back(d.to_double());
  auto dval = [&](std::int64_t j) {
    const auto p = static_cast<std::int64_t>(dpat.size());
    return dpat[static_cast<std::size_t>(((j % p) + p) % p)];
  };
  std::int64_t n_eff = 0;
  std::size_t next = 0;
  for (std::size_t i = 0; i < t.exps.size() && next < t.checkpoints.size(); ++i) {
    if (included(t, i)) {
      ++n_eff;
      const std::int64_t a = t.exps[i];
      const std::complex<double> w = t.phase.empty() ? 1.0 : unit(t.phase[i]);
      for (std::int64_t k = 0; k < cfg.x.width(); ++k) {
        const std::int64_t j = cfg.x.offset() + a + k;
        const auto slot = static_cast<std::size_t>(j - lo);
        if (iv) {
          Yx[slot] += iv->p[static_cast<std::size_t>(k)];
        } else {
          double v = c[static_cast<std::size_t>(k)];
          if (!dpat.empty()) v *= dval(j) / dval(j - a);
          Y[slot] += w * v;
        }
      }
    }
    const auto n = static_cast<std::int64_t>(i + 1);
    while (next < t.checkpoints.size() && t.checkpoints[next] == n) {
      TracePoint p;
      p.N = n;
      p.N_eff = n_eff;
      if (n_eff > 0) {
        std::complex<double> value = 0;
        if (iv) {
          i128 s = 0;
          for (i128 y : Yx) s += y * y;
          const i128 D2 = static_cast<i128>(iv->D) * iv->D;
          p.norm2 = ratio_to_double(s, D2 * n_eff * n_eff);
          for (std::int64_t k = 0; k < cfg.x.width(); ++k) {
            const std::int64_t slot = cfg.x.offset() + k - lo;
            if (slot >= 0 && slot < span)
              value += static_cast<double>(Yx[static_cast<std::size_t>(slot)]) / static_cast<double>(iv->D) *
                       c[static_cast<std::size_t>(k)];
          }
        } else {
          CompensatedSum s;
          for (const auto& y : Y) s.add(std::norm(y));
          p.norm2 = s.value() / (static_cast<double>(n_eff) * static_cast<double>(n_eff));
          for (std::int64_t k = 0; k < cfg.x.width(); ++k) {
            const std::int64_t slot = cfg.x.offset() + k - lo;
            if (slot >= 0 && slot < span) value += Y[static_cast<std::size_t>(slot)] * c[static_cast<std::size_t>(k)];
          }
        }
        p.value = value / (static_cast<double>(n_eff) * cfg.x.norm2());
      }
      tr.points.push_back(p);
      ++next;
    }
  }
  finish(tr, cfg.tol);
  return tr;
}

AverageTrace difference_average(const ExperimentConfig& cfg, int k) {
  require(k >= 1, "difference_average: k must be >= 1");
  return difference_average(cfg, k, generate_a(cfg.seq, cfg.N + k, cfg.jobs));
}

AverageTrace difference_average(const ExperimentConfig& input, int k, const GeneratedSequence& seq) {
  require(k >= 1, "difference_average: k must be >= 1");
  ExperimentConfig cfg = input;
  cfg.validate();
  require(static_cast<std::int64_t>(seq.a.size()) >= cfg.N + k, "difference_average: sequence shorter than N + k");
  std::vector<std::int64_t> a(seq.a.begin(), seq.a.begin() + cfg.N + k);
  if (cfg.dedup) a = dedup_first(a);
  Terms t;
  const auto horizon = static_cast<std::int64_t>(a.size()) - k;
  require(horizon >= 1, "difference_average: sequence too short after dedup");
  t.exps.resize(static_cast<std::size_t>(horizon));
  for (std::int64_t j = 0; j < horizon; ++j) {
    std::int64_t e = a[static_cast<std::size_t>(j + k)] - a[static_cast<std::size_t>(j)];
    if (e < 0) {
      e = 0;
      ++t.flagged;
    }
    t.exps[static_cast<std::size_t>(j)] = e;
  }
  t.checkpoints = clip_schedule(cfg.checkpoints, horizon);
  AverageTrace tr = accumulate(cfg.model, cfg.x, t);
  tr.horizon = horizon;
  tr.flagged = t.flagged;
  tr.dedup = cfg.dedup;
  finish(tr, cfg.tol);
  return tr;
}

WeakAverage weak_average(const ExperimentConfig& input) {
  ExperimentConfig cfg = input;
  cfg.validate();
  require(!cfg.witnesses.empty(), "weak_average: the witness family is empty");
  AverageTrace shell;
  Terms t = main_terms(cfg, shell);
  std::vector<VectorModel> ws;
  for (const auto& w : cfg.witnesses) ws.push_back(w.normalized());
  WeakAverage out;
  std::vector<CompensatedSum> sums(ws.size());
  for (std::size_t k = 0; k < ws.size(); ++k) out.per_witness.push_back({cfg.witnesses[k].str(), {}, {}, {}});
  out.sup_lower_bound.witness = "sup over witness family (lower bound)";
  std::int64_t n_eff = 0;
  std::size_t next = 0;
  for (std::size_t i = 0; i < t.exps.size() && next < t.checkpoints.size(); ++i) {
    if (included(t, i)) {
      ++n_eff;
      for (std::size_t k = 0; k < ws.size(); ++k) sums[k].add(std::abs(cfg.model.pair(cfg.x, t.exps[i], ws[k])));
    }
    const auto n = static_cast<std::int64_t>(i + 1);
    while (next < t.checkpoints.size() && t.checkpoints[next] == n) {
      double sup = 0;
      for (std::size_t k = 0; k < ws.size(); ++k) {
        const double v = n_eff > 0 ? sums[k].value() / static_cast<double>(n_eff) : 0.0;
        out.per_witness[k].checkpoints.push_back(n);
        out.per_witness[k].values.push_back(v);
        sup = std::max(sup, v);
      }
      out.sup_lower_bound.checkpoints.push_back(n);
      out.sup_lower_bound.values.push_back(sup);
      ++next;
    }
  }
  auto summarize_weak = [&](WeakTrace& w) {
    if (w.checkpoints.size() < 10) return;
    std::vector<std::complex<double>> z(w.values.begin(), w.values.end());
    w.summary = summarize(w.checkpoints, z, cfg.tol);
  };
  for (auto& w : out.per_witness) summarize_weak(w);
  summarize_weak(out.sup_lower_bound);
  return out;
}

TraceSummary verdict(const AverageTrace& trace, const Tolerances& tol) {
  std::vector<std::int64_t> cps;
  std::vector<std::complex<double>> values;
  for (const auto& p : trace.points) {
    cps.push_back(p.N);
    values.emplace_back(p.norm2, 0.0);
  }
  return summarize(cps, values, tol);
}

void write_trace_csv(std::ostream& out, const AverageTrace& trace) {
  out << "N,N_eff,value_re,value_im,norm2,osc\n";
  char buf[256];
  for (const auto& p : trace.points) {
    std::snprintf(buf, sizeof buf, "%lld,%lld,%.17g,%.17g,%.17g,%.17g\n", static_cast<long long>(p.N),
                  static_cast<long long>(p.N_eff), p.value.real(), p.value.imag(), p.norm2, p.osc);
    out << buf;
  }
}

}  // namespace ergolab
