#include "ergolab/growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ergolab/errors.hpp"

namespace ergolab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string prime_marks(int k) {
  if (k == 0) return "f";
  if (k <= 3) return "f" + std::string(static_cast<std::size_t>(k), '\'');
  return "f^(" + std::to_string(k) + ")";
}

double coef_ratio(const Coef& a, const Coef& b) { return static_cast<double>(a.value() / b.value()); }

// Limit of a / b as t -> infinity for nonzero normal forms.
double limit_ratio(const NormalForm& a, const NormalForm& b) {
  auto [sa, ca] = a.leading();
  auto [sb, cb] = b.leading();
  if (sa < sb) return 0.0;
  if (sb < sa) return coef_ratio(ca, cb) > 0 ? kInf : -kInf;
  return coef_ratio(ca, cb);
}

NormalForm times_t(const NormalForm& f) {
  return f * NormalForm::term(Coef::rational(1), {Rational(1), Rational(0), Rational(0)});
}

bool positive_nf(const NormalForm& f) { return !f.is_zero() && f.leading().second.sign() > 0; }

// Samples of one expression along the growth sample points.
struct Series {
  std::vector<long double> value;
  std::vector<long double> err;
  std::vector<bool> ok;  // evaluation succeeded
};

Series sample(const HardyExpr& e, const std::vector<std::int64_t>& ts, const PrecisionPolicy& p) {
  Series s;
  std::optional<CertifiedEvaluator> ev;
  try {
    ev.emplace(e, p);
  } catch (const DomainError&) {
    s.value.assign(ts.size(), 0);
    s.err.assign(ts.size(), kInf);
    s.ok.assign(ts.size(), false);
    return s;
  }
  for (std::int64_t t : ts) {
    try {
      auto a = ev->value_at(t, 1e-9L);
      s.value.push_back(a.value);
      s.err.push_back(a.err);
      s.ok.push_back(std::isfinite(static_cast<double>(a.value)));
    } catch (const Error&) {
      s.value.push_back(0);
      s.err.push_back(kInf);
      s.ok.push_back(false);
    }
  }
  return s;
}

std::size_t tail_start(std::size_t n) { return n / 2; }

bool tail_positive(const Series& s) {
  for (std::size_t j = tail_start(s.value.size()); j < s.value.size(); ++j)
    if (!s.ok[j] || !(s.value[j] - s.err[j] > 0)) return false;
  return true;
}

void refuse_superpolynomial(const HardyExpr& f, const std::vector<std::int64_t>& ts, const PrecisionPolicy& p) {
  if (!f.contains(Op::Exp)) return;
  Series v = sample(f, ts, p);
  Series d = sample(differentiate(f, 1), ts, p);
  std::vector<long double> local;
  for (std::size_t j = 0; j < ts.size(); ++j) {
    if (!v.ok[j] || !d.ok[j]) throw Unsupported("superpolynomial growth (evaluation overflow): " + f.str());
    local.push_back(std::fabs(static_cast<long double>(ts[j]) * d.value[j] / v.value[j]));
  }
  if (running_max_growth(local) > 0.05 || local.back() > 64)
    throw Unsupported("superpolynomial growth (local exponent t f'/f unbounded): " + f.str());
}

GrowthOrder compare_sampled(const HardyExpr& f, const HardyExpr& g, const GrowthOptions& opt) {
  auto ts_f = growth_samples(f, opt.horizon);
  auto ts_g = growth_samples(g, opt.horizon);
  const auto& ts = ts_f.front() >= ts_g.front() ? ts_f : ts_g;
  Series a = sample(f, ts, opt.precision);
  Series b = sample(g, ts, opt.precision);
  std::vector<long double> r;
  for (std::size_t j = 0; j < ts.size(); ++j) {
    if (!a.ok[j] || !b.ok[j] || a.value[j] <= 0 || b.value[j] <= 0) return GrowthOrder::Undecided;
    r.push_back(std::log(a.value[j]) - std::log(b.value[j]));
  }
  if (r.size() < 8) return GrowthOrder::Undecided;
  const std::size_t n = r.size();
  const std::size_t q0 = n / 4;
  const std::size_t q1 = n / 2;
  const std::size_t q2 = (3 * n) / 4;
  const std::size_t q3 = n - 1;
  const long double d1 = r[q1] - r[q0];
  const long double d2 = r[q2] - r[q1];
  const long double d3 = r[q3] - r[q2];
  if (std::fabs(d3) < 0.05L && std::fabs(d3) <= std::fabs(d2)) return GrowthOrder::Equivalent;
  if (d1 < 0 && d2 < 0 && d3 <= -0.05L) return GrowthOrder::Less;
  if (d1 > 0 && d2 > 0 && d3 >= 0.05L) return GrowthOrder::Greater;
  return GrowthOrder::Undecided;
}

HardyExpr power_of_t(const Rational& a) { return pow(HardyExpr::var(), a); }

}  // namespace

const char* growth_order_name(GrowthOrder o) {
  switch (o) {
    case GrowthOrder::Less: return "f<g";
    case GrowthOrder::Equivalent: return "f~g";
    case GrowthOrder::Greater: return "g<f";
    case GrowthOrder::Undecided: return "undecided";
  }
  return "?";
}

const char* growth_verdict_name(GrowthVerdict v) {
  switch (v) {
    case GrowthVerdict::Pm: return "Pm";
    case GrowthVerdict::PmPrime: return "PmPrime";
    case GrowthVerdict::Ml: return "Ml";
    case GrowthVerdict::RationalPolyResidue: return "RationalPolyResidue";
    case GrowthVerdict::Unclassified: return "Unclassified";
  }
  return "?";
}

std::vector<std::int64_t> growth_samples(const HardyExpr& f, double horizon) {
  std::int64_t t0 = std::max<std::int64_t>(validity_threshold(f), 16);
  std::vector<std::int64_t> ts;
  for (std::int64_t t = t0; static_cast<double>(t) <= horizon; t *= 2) {
    ts.push_back(t);
    if (t > (std::int64_t{1} << 61)) break;
  }
  if (ts.empty()) ts.push_back(t0);
  return ts;
}

double running_max_growth(const std::vector<long double>& values) {
  if (values.size() < 4) return kInf;
  std::vector<long double> m(values.size());
  long double run = -std::numeric_limits<long double>::infinity();
  for (std::size_t j = 0; j < values.size(); ++j) {
    run = std::max(run, values[j]);
    m[j] = run;
  }
  const std::size_t h = tail_start(values.size());
  const std::size_t last = values.size() - 1;
  if (!(m[h] > 0)) return m[last] > m[h] ? kInf : 0.0;
  long double ratio = m[last] / m[h];
  return static_cast<double>(std::pow(ratio, 1.0L / static_cast<long double>(last - h)) - 1.0L);
}

bool eventually_positive(const HardyExpr& f, const GrowthOptions& opt) {
  if (auto nf = NormalForm::from_expr(f)) return positive_nf(*nf);
  try {
    auto ts = growth_samples(f, opt.horizon);
    return tail_positive(sample(f, ts, opt.precision));
  } catch (const DomainError&) {
    return false;
  }
}

GrowthOrder compare_growth(const HardyExpr& f, const HardyExpr& g, const GrowthOptions& opt) {
  if (!eventually_positive(f, opt)) throw DomainError("not eventually positive: " + f.str());
  if (!eventually_positive(g, opt)) throw DomainError("not eventually positive: " + g.str());
  auto nf = NormalForm::from_expr(f);
  auto ng = NormalForm::from_expr(g);
  if (nf && ng) {
    Scale a = nf->leading().first;
    Scale b = ng->leading().first;
    if (a < b) return GrowthOrder::Less;
    if (b < a) return GrowthOrder::Greater;
    return GrowthOrder::Equivalent;
  }
  return compare_sampled(f, g, opt);
}

GrowthClass classify_Pm(const HardyExpr& f, const GrowthOptions& opt) {
  require(opt.m_max >= 1, "m_max must be >= 1");
  GrowthClass out;
  if (auto nf = NormalForm::from_expr(f)) {
    out.symbolic = true;
    if (!positive_nf(*nf)) throw DomainError("not eventually positive: " + f.str());
    std::vector<NormalForm> d{*nf};
    for (int k = 1; k <= opt.m_max; ++k) d.push_back(d.back().derivative());
    for (int m = 1; m <= opt.m_max; ++m) {
      bool ok = true;
      for (int k = 0; k <= m; ++k) {
        bool pos = positive_nf(d[k]);
        double sign = d[k].is_zero() ? 0.0 : d[k].leading().second.sign();
        out.evidence.push_back({"m=" + std::to_string(m) + ":positive:" + prime_marks(k), "symbolic", kInf, sign, pos});
        ok = ok && pos;
      }
      if (!ok) continue;
      NormalForm den = times_t(d[m]);
      bool ratio_ok = !(den.leading().first < d[m - 1].leading().first);
      out.evidence.push_back(
          {"m=" + std::to_string(m) + ":ratio", "symbolic", kInf, limit_ratio(d[m - 1], den), ratio_ok});
      Scale sm = d[m].leading().first;
      bool tail_ok = sm <= kConstantScale;
      double lim = sm < kConstantScale ? 0.0 : (sm == kConstantScale ? d[m].leading().second.value() : kInf);
      out.evidence.push_back({"m=" + std::to_string(m) + ":tail-sup", "symbolic", kInf, lim, tail_ok});
      if (ratio_ok && tail_ok) {
        out.verdict = GrowthVerdict::Pm;
        out.index = m;
        return out;
      }
    }
    out.note = "no m <= " + std::to_string(opt.m_max) + " satisfies all three conditions";
    return out;
  }

  auto ts = growth_samples(f, opt.horizon);
  refuse_superpolynomial(f, ts, opt.precision);
  const double horizon = static_cast<double>(ts.back());
  std::vector<Series> d;
  d.push_back(sample(f, ts, opt.precision));
  if (!tail_positive(d[0])) throw DomainError("not eventually positive: " + f.str());
  for (int m = 1; m <= opt.m_max; ++m) {
    d.push_back(sample(differentiate(f, m), ts, opt.precision));
    bool ok = true;
    for (int k = 0; k <= m; ++k) {
      bool pos = tail_positive(d[k]);
      out.evidence.push_back({"m=" + std::to_string(m) + ":positive:" + prime_marks(k), "sampled", horizon,
                              static_cast<double>(d[k].value.back()), pos});
      ok = ok && pos;
    }
    if (!ok) continue;
    std::vector<long double> ratio;
    std::vector<long double> deriv;
    for (std::size_t j = tail_start(ts.size()) / 2; j < ts.size(); ++j) {
      long double den = static_cast<long double>(ts[j]) * d[m].value[j];
      ratio.push_back(den > 0 ? d[m - 1].value[j] / den : std::numeric_limits<long double>::infinity());
      deriv.push_back(d[m].value[j]);
    }
    double rg = running_max_growth(ratio);
    double dg = running_max_growth(deriv);
    bool ratio_ok = rg < opt.bounded_growth;
    bool tail_ok = dg < opt.bounded_growth;
    out.evidence.push_back({"m=" + std::to_string(m) + ":ratio", "sampled", horizon,
                            static_cast<double>(*std::max_element(ratio.begin(), ratio.end())), ratio_ok});
    out.evidence.push_back({"m=" + std::to_string(m) + ":tail-sup", "sampled", horizon,
                            static_cast<double>(*std::max_element(deriv.begin(), deriv.end())), tail_ok});
    if (ratio_ok && tail_ok) {
      out.verdict = GrowthVerdict::Pm;
      out.index = m;
      return out;
    }
  }
  out.note = "sampled up to t=" + std::to_string(ts.back()) + "; no m <= " + std::to_string(opt.m_max) + " passed";
  return out;
}

GrowthClass classify_Pm_prime(const HardyExpr& f, const GrowthOptions& opt) {
  require(opt.m_max >= 1, "m_max must be >= 1");
  GrowthClass out;
  auto nf = NormalForm::from_expr(f);
  out.symbolic = nf.has_value();
  const char* method = nf ? "symbolic" : "sampled";
  const double horizon = nf ? kInf : opt.horizon;
  if (!eventually_positive(f, opt)) throw DomainError("not eventually positive: " + f.str());
  for (int m = 1; m <= opt.m_max; ++m) {
    GrowthOrder lower = compare_growth(power_of_t(Rational(m - 1)), f, opt);
    GrowthOrder upper = compare_growth(f, power_of_t(Rational(m)), opt);
    bool i_ok = lower == GrowthOrder::Less && (upper == GrowthOrder::Less || upper == GrowthOrder::Equivalent);
    out.evidence.push_back({"m=" + std::to_string(m) + ":between-powers", method, horizon, i_ok ? 1.0 : 0.0, i_ok});
    if (!i_ok) continue;
    HardyExpr a = differentiate(f, m) * HardyExpr::var();
    HardyExpr b = m == 1 ? f : differentiate(f, m - 1);
    bool ii_ok = false;
    if (eventually_positive(a, opt) && eventually_positive(b, opt)) {
      GrowthOrder o = compare_growth(b, a, opt);
      ii_ok = o == GrowthOrder::Less || o == GrowthOrder::Equivalent;
    }
    out.evidence.push_back({"m=" + std::to_string(m) + ":derivative-ratio", method, horizon, ii_ok ? 1.0 : 0.0, ii_ok});
    if (ii_ok) {
      out.verdict = GrowthVerdict::PmPrime;
      out.index = m;
      return out;
    }
  }
  return out;
}

GrowthClass classify_Ml(const HardyExpr& g, int l_max, const GrowthOptions& opt) {
  require(l_max >= 0, "l_max must be >= 0");
  GrowthClass out;
  auto ng = NormalForm::from_expr(g);
  if (ng) {
    out.symbolic = true;
    if (!positive_nf(*ng)) throw DomainError("not eventually positive: " + g.str());
    Scale s = ng->leading().first;
    for (int l = 0; l <= l_max; ++l) {
      Scale lower{Rational(l), Rational(1), Rational(0)};
      Scale upper{Rational(l + 1), Rational(0), Rational(0)};
      bool lo = lower < s;
      bool hi = s < upper;
      out.evidence.push_back({"l=" + std::to_string(l) + ":above-t^l*ln(t)", "symbolic", kInf, lo ? 1.0 : 0.0, lo});
      out.evidence.push_back({"l=" + std::to_string(l) + ":below-t^(l+1)", "symbolic", kInf, hi ? 1.0 : 0.0, hi});
      if (lo && hi) {
        out.verdict = GrowthVerdict::Ml;
        out.index = l;
        return out;
      }
    }
    // A rational polynomial up to o(1) is reported separately.
    NormalForm poly = ng->polynomial_part();
    NormalForm rest = (*ng - poly).without_vanishing();
    bool rational_poly = rest.is_zero();
    for (const auto& [sc, c] : poly.terms())
      if (sc.alpha.sign() > 0 && c.rationality() != Rationality::Rational) rational_poly = false;
    if (rational_poly) {
      out.verdict = GrowthVerdict::RationalPolyResidue;
      out.note = "rational polynomial up to o(1)";
    }
    return out;
  }
  if (!eventually_positive(g, opt)) throw DomainError("not eventually positive: " + g.str());
  const HardyExpr t = HardyExpr::var();
  for (int l = 0; l <= l_max; ++l) {
    HardyExpr lower = l == 0 ? ln(t) : power_of_t(Rational(l)) * ln(t);
    bool lo = compare_growth(lower, g, opt) == GrowthOrder::Less;
    bool hi = compare_growth(g, power_of_t(Rational(l + 1)), opt) == GrowthOrder::Less;
    out.evidence.push_back({"l=" + std::to_string(l) + ":above-t^l*ln(t)", "sampled", opt.horizon, lo ? 1.0 : 0.0, lo});
    out.evidence.push_back({"l=" + std::to_string(l) + ":below-t^(l+1)", "sampled", opt.horizon, hi ? 1.0 : 0.0, hi});
    if (lo && hi) {
      out.verdict = GrowthVerdict::Ml;
      out.index = l;
      return out;
    }
  }
  return out;
}

}  // namespace ergolab
