#include "ergolab/sequence.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>
#include <unordered_set>

#include "ergolab/errors.hpp"
#include "ergolab/growth.hpp"
#include "spec_text.hpp"

namespace ergolab {
namespace {

constexpr std::int64_t kMaxIndex = std::int64_t{1} << 62;

std::int64_t parse_int(std::string_view s, std::string_view what) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw ParseError("bad integer in perturbation " + std::string(what) + ": '" + std::string(s) + "'", 0);
  return v;
}

using text::split;

std::int64_t checked_abs(std::int64_t v) {
  if (v == std::numeric_limits<std::int64_t>::min()) throw ParseError("perturbation value out of range", 0);
  return v < 0 ? -v : v;
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double hash_uniform(std::uint64_t seed, std::uint64_t index) {
  return static_cast<double>(mix64(mix64(seed) ^ index) >> 11) * 0x1p-53;
}

Perturbation Perturbation::parse(std::string_view spec) {
  Perturbation p;
  if (spec == "zero" || spec.empty()) return p;
  std::size_t colon = spec.find(':');
  if (colon == std::string_view::npos) throw ParseError("unknown perturbation '" + std::string(spec) + "'", 0);
  std::string_view kind = spec.substr(0, colon);
  std::string_view body = spec.substr(colon + 1);
  if (kind == "const") {
    p.kind_ = Kind::Constant;
    p.pattern_ = {parse_int(body, "const")};
    p.bound_ = checked_abs(p.pattern_[0]);
  } else if (kind == "period") {
    p.kind_ = Kind::Periodic;
    for (auto part : split(body, ',')) {
      p.pattern_.push_back(parse_int(part, "period"));
      p.bound_ = std::max(p.bound_, checked_abs(p.pattern_.back()));
    }
  } else if (kind == "rand") {
    p.kind_ = Kind::Random;
    bool have_r = false;
    for (auto part : split(body, ',')) {
      std::size_t eq = part.find('=');
      if (eq == std::string_view::npos) throw ParseError("rand perturbation expects key=value", 0);
      auto key = part.substr(0, eq);
      auto val = part.substr(eq + 1);
      if (key == "r") {
        p.bound_ = parse_int(val, "rand");
        have_r = true;
      } else if (key == "seed") {
        p.seed_ = static_cast<std::uint64_t>(parse_int(val, "rand"));
      } else {
        throw ParseError("unknown rand key '" + std::string(key) + "'", 0);
      }
    }
    if (!have_r || p.bound_ < 0 || p.bound_ > (std::int64_t{1} << 40))
      throw ParseError("rand perturbation needs 0 <= r <= 2^40", 0);
  } else {
    throw ParseError("unknown perturbation kind '" + std::string(kind) + "'", 0);
  }
  return p;
}

std::int64_t Perturbation::at(std::int64_t n) const {
  switch (kind_) {
    case Kind::Zero:
      return 0;
    case Kind::Constant:
      return pattern_[0];
    case Kind::Periodic:
      return pattern_[static_cast<std::size_t>((n - 1) % static_cast<std::int64_t>(pattern_.size()))];
    case Kind::Random: {
      std::uint64_t span = static_cast<std::uint64_t>(2 * bound_ + 1);
      return static_cast<std::int64_t>(mix64(mix64(seed_) ^ static_cast<std::uint64_t>(n)) % span) - bound_;
    }
  }
  return 0;
}

std::string Perturbation::str() const {
  switch (kind_) {
    case Kind::Zero:
      return "zero";
    case Kind::Constant:
      return "const:" + std::to_string(pattern_[0]);
    case Kind::Periodic: {
      std::string s = "period:";
      for (std::size_t i = 0; i < pattern_.size(); ++i) s += (i ? "," : "") + std::to_string(pattern_[i]);
      return s;
    }
    case Kind::Random:
      return "rand:r=" + std::to_string(bound_) + ",seed=" + std::to_string(seed_);
  }
  return "zero";
}

GeneratedSequence generate_a(const SubsequenceSpec& spec, std::int64_t N, int jobs) {
  require(N >= 1, "generate_a: N must be >= 1");
  require(N <= (std::int64_t{1} << 32), "generate_a: N too large");
  GeneratedSequence out;
  out.a.assign(static_cast<std::size_t>(N), 0);
  out.flags.assign(static_cast<std::size_t>(N), 0);
  out.perturbation_bound = spec.h.bound();

  std::optional<CertifiedEvaluator> ev;
  try {
    ev.emplace(spec.f, spec.precision);
  } catch (const DomainError&) {
    // Undefined everywhere on the scan grid; every index takes the convention.
  }

  auto fill = [&](std::int64_t lo, std::int64_t hi) {
    TierHint hint{spec.precision.min_tier, 0};
    for (std::int64_t n = lo; n < hi; ++n) {
      auto i = static_cast<std::size_t>(n - 1);
      std::int64_t v = 0;
      bool defined = false;
      if (ev) {
        try {
          v = ev->floor_at(n, &hint);
          defined = true;
        } catch (const PrecisionExhausted&) {
          throw;
        } catch (const DomainError&) {
        }
      }
      if (!defined) {
        out.flags[i] = kFlagUndefined;
        continue;
      }
      std::int64_t h = spec.h.at(n);
      if ((h > 0 && v > std::numeric_limits<std::int64_t>::max() - h))
        throw DomainError("a_n overflows 64 bits at n=" + std::to_string(n));
      v += h;
      if (v < 0) {
        out.flags[i] = kFlagNegative;
        continue;
      }
      out.a[i] = v;
    }
  };

  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(std::min<std::int64_t>(N / 1024 + 1, 64))));
  if (jobs == 1) {
    fill(1, N + 1);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
    std::int64_t chunk = (N + jobs - 1) / jobs;
    for (int j = 0; j < jobs; ++j) {
      std::int64_t lo = 1 + j * chunk;
      std::int64_t hi = std::min(N + 1, lo + chunk);
      pool.emplace_back([&, j, lo, hi] {
        try {
          if (lo < hi) fill(lo, hi);
        } catch (...) {
          errors[static_cast<std::size_t>(j)] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  for (std::int64_t n = 1; n <= N; ++n) {
    if (out.flags[static_cast<std::size_t>(n - 1)]) {
      ++out.flagged;
      out.last_flagged = n;
    }
  }
  return out;
}

std::vector<std::int64_t> dedup_first(const std::vector<std::int64_t>& a) {
  std::vector<std::int64_t> out;
  std::unordered_set<std::int64_t> seen;
  seen.reserve(a.size());
  for (auto v : a)
    if (seen.insert(v).second) out.push_back(v);
  return out;
}

std::vector<std::int64_t> BkTable::gaps() const {
  std::vector<std::int64_t> d;
  for (std::size_t j = 0; j + 1 < b.size(); ++j) d.push_back(b[j + 1] - b[j]);
  return d;
}

namespace {

// f defined at n and f'(n) >= 0.
struct MonotoneProbe {
  CertifiedEvaluator f;
  std::optional<CertifiedEvaluator> df;

  bool good(std::int64_t n) const {
    try {
      (void)f.compare_at(n, Rational(0));
    } catch (const OverflowError&) {
    } catch (const PrecisionExhausted&) {
    } catch (const DomainError&) {
      return false;
    }
    if (!df) return true;
    try {
      return df->compare_at(n, Rational(0)) >= 0;
    } catch (const OverflowError&) {
      return true;
    } catch (const DomainError&) {
      return false;
    }
  }
};

// Least integer in (bad, good] at which the probe holds, assuming a single
// switch inside the interval.
std::int64_t first_good(const MonotoneProbe& p, std::int64_t bad, std::int64_t good) {
  while (good - bad > 1) {
    std::int64_t mid = bad + (good - bad) / 2;
    if (p.good(mid))
      good = mid;
    else
      bad = mid;
  }
  return good;
}

std::int64_t monotone_start(const HardyExpr& f, const PrecisionPolicy& precision) {
  MonotoneProbe probe{CertifiedEvaluator(f, precision), std::nullopt};
  HardyExpr d = differentiate(f, 1);
  if (!d.is_constant()) {
    try {
      probe.df.emplace(d, precision);
    } catch (const DomainError&) {
      throw DomainError("derivative undefined on the scan grid: " + d.str());
    }
  } else if (d.as_rational() && d.as_rational()->sign() < 0) {
    throw DomainError("f is not eventually non-decreasing: " + f.str());
  }
  const std::int64_t T = probe.f.threshold();

  // Grid above the threshold: integers T..T+64, then T * 2^j.
  std::vector<std::int64_t> grid;
  for (std::int64_t n = T; n <= T + 64; ++n) grid.push_back(n);
  for (std::int64_t n = T * 2; n > 0 && n <= kMaxIndex; n *= 2)
    if (n > T + 64) grid.push_back(n);
  std::int64_t last_bad = 0;
  std::size_t last_bad_idx = grid.size();
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (!probe.good(grid[i])) {
      last_bad = grid[i];
      last_bad_idx = i;
    }
  if (last_bad_idx + 1 == grid.size()) throw DomainError("f is not eventually non-decreasing: " + f.str());
  if (last_bad_idx < grid.size()) return first_good(probe, last_bad, grid[last_bad_idx + 1]);

  // Below the threshold f is undefined at T/2; the start lies in (T/2, T].
  if (T == 1) return 1;
  return first_good(probe, T / 2, T);
}

}  // namespace

BkTable build_bk(const HardyExpr& f, std::int64_t K, const PrecisionPolicy& precision) {
  require(K >= 1, "build_bk: K must be >= 1");
  BkTable table;
  table.f = f;
  table.start = monotone_start(f, precision);
  CertifiedEvaluator ev(f, precision);
  TierHint hint{precision.min_tier, 0};
  auto reaches = [&](std::int64_t n, std::int64_t k) { return ev.compare_at(n, Rational(k), &hint) >= 0; };

  std::int64_t lo = table.start;
  table.b.reserve(static_cast<std::size_t>(K));
  for (std::int64_t k = 1; k <= K; ++k) {
    if (reaches(lo, k)) {
      table.b.push_back(lo);
      continue;
    }
    std::int64_t step = 1;
    std::int64_t hi = lo + step;
    while (!reaches(hi, k)) {
      lo = hi;
      if (step > kMaxIndex / 2 || hi > kMaxIndex - 2 * step)
        throw DomainError("f stays below " + std::to_string(k) + " up to 2^62: " + f.str());
      step *= 2;
      hi = lo + step;
    }
    while (hi - lo > 1) {
      std::int64_t mid = lo + (hi - lo) / 2;
      if (reaches(mid, k))
        hi = mid;
      else
        lo = mid;
    }
    table.b.push_back(hi);
    lo = hi;
  }
  return table;
}

RatioDiagnostics ratio_diagnostics(const std::vector<std::int64_t>& a) {
  const auto N = static_cast<std::int64_t>(a.size());
  require(N >= 4, "ratio_diagnostics: sequence shorter than 4");
  RatioDiagnostics r;
  r.N = N;
  auto at = [&](std::int64_t n) { return a[static_cast<std::size_t>(n - 1)]; };
  auto ratio_sup = [&](std::int64_t lo, std::int64_t hi) {
    Witnessed w{0, 0};
    for (std::int64_t n = std::max<std::int64_t>(lo, 1); n <= hi && 2 * n <= N; ++n) {
      if (at(n) <= 0) continue;
      double q = static_cast<double>(at(2 * n)) / static_cast<double>(at(n));
      if (q > w.value) w = {q, n};
    }
    return w;
  };
  r.sup_a2n_over_an = ratio_sup(1, N / 2);
  r.tail_sup_a2n_over_an = ratio_sup(N / 4, N / 2);
  r.prev_sup_a2n_over_an = ratio_sup(N / 8, N / 4);
  r.ratio_growing = r.tail_sup_a2n_over_an.value > 1.05 * r.prev_sup_a2n_over_an.value;
  for (std::int64_t n = std::max<std::int64_t>(N / 2, 1); n < N; ++n) {
    if (at(n) <= 0) continue;
    double q = std::fabs(static_cast<double>(at(n + 1)) / static_cast<double>(at(n)) - 1.0);
    if (q > r.tail_max_step.value || r.tail_max_step.at == 0) r.tail_max_step = {q, n};
  }
  for (std::int64_t n = 1; n < N; ++n) {
    if (at(n + 1) <= at(n)) {
      ++r.non_increasing;
      r.last_violation = n;
    }
    if (at(n + 1) < at(n)) ++r.decreasing;
  }
  return r;
}

BkDiagnostics bk_diagnostics(const BkTable& table) {
  const auto K = static_cast<std::int64_t>(table.b.size());
  require(K >= 4, "bk_diagnostics: K must be >= 4");
  BkDiagnostics r;
  r.K = K;
  auto b = [&](std::int64_t k) { return table.b[static_cast<std::size_t>(k - 1)]; };
  auto stat = [&](std::int64_t k) {
    require(b(k) >= 1 && b(k + 1) >= b(k), "bk_diagnostics: malformed table");
    return static_cast<double>(k) * static_cast<double>(b(k + 1) - b(k)) / static_cast<double>(b(k));
  };
  std::int64_t half = std::max<std::int64_t>(K / 2, 1);
  double first = 0, second = 0;
  for (std::int64_t k = 1; k < K; ++k) {
    double s = stat(k);
    if (s > r.sup_k_gap_over_b.value || k == 1) r.sup_k_gap_over_b = {s, k};
    if (k >= half) {
      if (s > r.tail_sup_k_gap_over_b.value || r.tail_sup_k_gap_over_b.at == 0) r.tail_sup_k_gap_over_b = {s, k};
      if (k < half + (K - half) / 2)
        first = std::max(first, s);
      else
        second = std::max(second, s);
      double q = static_cast<double>(b(k + 1)) / static_cast<double>(b(k));
      if (q > r.tail_b_ratio.value) r.tail_b_ratio = {q, k};
      double excess = static_cast<double>(k) * (q - 1.0);
      if (excess > r.tail_b_ratio_excess.value || r.tail_b_ratio_excess.at == 0) r.tail_b_ratio_excess = {excess, k};
    }
  }
  r.tail_running_max_non_increasing = second <= first;

  // Block maxima over consecutive doublings starting at k0.
  std::int64_t k0 = std::max<std::int64_t>(1, std::min<std::int64_t>(100, K / 4));
  std::vector<long double> blocks;
  for (std::int64_t lo = k0; lo < K; lo *= 2) {
    long double m = 0;
    for (std::int64_t k = lo; k < std::min(2 * lo, K); ++k) m = std::max<long double>(m, stat(k));
    blocks.push_back(m);
  }
  r.running_max_growth = running_max_growth(blocks);
  r.running_max_from = k0;

  // sup_{j<=k} d_j / (d_k + 1) via the running maximum of the gaps.
  std::int64_t best_d = -1, best_j = 0;
  for (std::int64_t k = 1; k < K; ++k) {
    std::int64_t d = b(k + 1) - b(k);
    if (d > best_d) {
      best_d = d;
      best_j = k;
    }
    double q = static_cast<double>(best_d) / static_cast<double>(d + 1);
    if (q > r.sup_gap_ratio.value || k == 1) {
      r.sup_gap_ratio = {q, k};
      r.sup_gap_ratio_j = best_j;
    }
  }
  return r;
}

void write_sequence_text(std::ostream& out, const std::vector<std::int64_t>& a) {
  for (auto v : a) out << v << '\n';
}

void write_sequence_binary(std::ostream& out, const std::vector<std::int64_t>& a) {
  for (auto v : a) {
    auto u = static_cast<std::uint64_t>(v);
    char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((u >> (8 * i)) & 0xff);
    out.write(bytes, 8);
  }
}

}  // namespace ergolab
