#include "ergolab/index_set.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "ergolab/errors.hpp"
#include "ergolab/evaluate.hpp"
#include "ergolab/sequence.hpp"
#include "spec_text.hpp"

namespace ergolab {
namespace {

using text::parse_i64;
using text::split;

double parse_double(const std::string& s, const char* what) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw ParseError(std::string("bad number in ") + what + ": '" + s + "'", 0);
  return v;
}

HardyExpr parse_constant(const std::string& s, const char* what) {
  HardyExpr e = HardyExpr::parse(s);
  if (!e.is_constant()) throw ParseError(std::string(what) + " must be a constant: '" + s + "'", 0);
  return e;
}

Coef constant_coef(const HardyExpr& e, bool& exact) {
  auto nf = NormalForm::from_expr(e);
  if (!nf) {
    exact = false;
    return Coef();
  }
  if (nf->is_zero()) return Coef::rational(0);
  if (nf->terms().size() != 1 || !(nf->leading().first == kConstantScale)) {
    exact = false;
    return Coef();
  }
  Coef c = nf->leading().second;
  if (!c.exact()) exact = false;
  return c;
}

Quad quad_value(const HardyExpr& e, Quad& err) {
  auto a = eval_approx<Quad>(e, static_cast<Quad>(0), std::nullopt, 113);
  err = std::max(err, a.err);
  return a.value;
}

// Champernowne binary word 1 10 11 100 101 ...; bit n (1-based).
bool champernowne_bit(std::int64_t n) {
  std::int64_t pos = n - 1;
  int L = 1;
  while (true) {
    // 2^(L-1) numbers of L bits each.
    std::int64_t block = (std::int64_t{1} << (L - 1)) * L;
    if (pos < block) break;
    pos -= block;
    ++L;
  }
  std::int64_t number = (std::int64_t{1} << (L - 1)) + pos / L;
  int bit = L - 1 - static_cast<int>(pos % L);
  return (number >> bit) & 1;
}

std::string verdict_word(std::uint32_t code, int L) {
  std::string w(static_cast<std::size_t>(L), '0');
  for (int j = 0; j < L; ++j)
    if ((code >> (L - 1 - j)) & 1U) w[static_cast<std::size_t>(j)] = '1';
  return w;
}

// max - min of count/checkpoint over checkpoints in [N/10, N].
double band_of(const std::vector<std::int64_t>& cps, const std::vector<std::int64_t>& counts) {
  if (cps.empty()) return 0;
  const std::int64_t N = cps.back();
  double lo = 1e300, hi = -1e300;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (10 * cps[i] < N) continue;
    double d = static_cast<double>(counts[i]) / static_cast<double>(cps[i]);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return hi >= lo ? hi - lo : 0;
}

}  // namespace

IndexSet IndexSet::natural() {
  IndexSet s;
  s.kind_ = Kind::Natural;
  s.spec_ = "nat";
  return s;
}

IndexSet IndexSet::progression(std::int64_t offset, std::int64_t step) {
  require(offset >= 1 && step >= 1, "ap: offset and step must be >= 1");
  IndexSet s;
  s.kind_ = Kind::Progression;
  s.offset_ = offset;
  s.step_ = step;
  s.spec_ = "ap:" + std::to_string(offset) + "," + std::to_string(step);
  return s;
}

IndexSet IndexSet::rotation(const HardyExpr& alpha, const HardyExpr& lo, const HardyExpr& hi, const HardyExpr& x0) {
  for (const auto* e : {&alpha, &lo, &hi, &x0}) require(e->is_constant(), "rot: parameters must be constants");
  auto r = std::make_shared<Rot>();
  r->alpha = alpha;
  r->lo = lo;
  r->hi = hi;
  r->x0 = x0;
  r->exact = true;
  r->c_alpha = constant_coef(alpha, r->exact);
  r->c_lo = constant_coef(lo, r->exact);
  r->c_hi = constant_coef(hi, r->exact);
  r->c_x0 = constant_coef(x0, r->exact);
  auto qa = alpha.as_rational(), ql = lo.as_rational(), qh = hi.as_rational(), qx = x0.as_rational();
  r->all_rational = qa && ql && qh && qx;
  if (r->all_rational) {
    r->q_alpha = *qa - Rational(qa->floor());
    r->q_lo = *ql;
    r->q_hi = *qh;
    r->q_x0 = *qx;
  }
  r->f_alpha = quad_value(alpha, r->f_err);
  r->f_lo = quad_value(lo, r->f_err);
  r->f_hi = quad_value(hi, r->f_err);
  r->f_x0 = quad_value(x0, r->f_err);
  r->f_alpha -= floorq(r->f_alpha);
  require(r->f_lo >= 0 && r->f_lo < r->f_hi && r->f_hi <= 1, "rot: need 0 <= lo < hi <= 1");
  IndexSet s;
  s.kind_ = Kind::Rotation;
  s.rot_ = std::move(r);
  s.spec_ = "rot:alpha=" + alpha.str() + ",lo=" + lo.str() + ",hi=" + hi.str() + ",x0=" + x0.str();
  return s;
}

IndexSet IndexSet::bernoulli(double p, std::uint64_t seed) {
  require(p >= 0 && p <= 1, "bern: p must lie in [0, 1]");
  IndexSet s;
  s.kind_ = Kind::Bernoulli;
  s.p_ = p;
  s.seed_ = seed;
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, p);
  s.spec_ = "bern:p=" + std::string(buf, res.ptr) + ",seed=" + std::to_string(seed);
  return s;
}

IndexSet IndexSet::champernowne() {
  IndexSet s;
  s.kind_ = Kind::Champernowne;
  s.spec_ = "champ";
  return s;
}

IndexSet IndexSet::blocks() {
  IndexSet s;
  s.kind_ = Kind::Blocks;
  s.spec_ = "blocks";
  return s;
}

IndexSet IndexSet::mask(std::vector<std::uint8_t> bits, bool repeat) {
  require(!repeat || !bits.empty(), "mask: a repeating mask must be non-empty");
  IndexSet s;
  s.kind_ = Kind::Mask;
  s.repeat_ = repeat;
  std::string w = "mask:";
  for (auto& b : bits) {
    b = b ? 1 : 0;
    w += b ? '1' : '0';
  }
  if (repeat) w += ",repeat";
  s.spec_ = std::move(w);
  s.bits_ = std::make_shared<const std::vector<std::uint8_t>>(std::move(bits));
  return s;
}

IndexSet IndexSet::parse(std::string_view spec) {
  std::string s(spec);
  std::string kind = s.substr(0, s.find(':'));
  std::string body = s.find(':') == std::string::npos ? "" : s.substr(s.find(':') + 1);
  if (kind == "nat") return natural();
  if (kind == "champ") return champernowne();
  if (kind == "blocks") return blocks();
  if (kind == "ap") {
    auto parts = split(body, ',');
    if (parts.size() != 2) throw ParseError("ap expects offset,step", 0);
    return progression(parse_i64(parts[0], "ap"), parse_i64(parts[1], "ap"));
  }
  if (kind == "mask") {
    auto parts = split(body, ',');
    bool repeat = parts.size() == 2 && parts[1] == "repeat";
    if (parts.size() > 2 || (parts.size() == 2 && !repeat)) throw ParseError("mask expects bits[,repeat]", 0);
    std::vector<std::uint8_t> bits;
    for (char ch : parts[0]) {
      if (ch != '0' && ch != '1') throw ParseError("mask bits must be 0 or 1", 0);
      bits.push_back(ch == '1');
    }
    return mask(std::move(bits), repeat);
  }
  if (kind == "bern" || kind == "rot") {
    std::string alpha, lo = "0", hi, x0 = "0", p;
    std::uint64_t seed = 0;
    for (const auto& kv : split(body, ',')) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) throw ParseError(kind + " expects key=value pairs", 0);
      std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
      if (kind == "bern" && key == "p") p = val;
      else if (kind == "bern" && key == "seed") seed = static_cast<std::uint64_t>(parse_i64(val, "bern"));
      else if (kind == "rot" && key == "alpha") alpha = val;
      else if (kind == "rot" && key == "lo") lo = val;
      else if (kind == "rot" && key == "hi") hi = val;
      else if (kind == "rot" && key == "x0") x0 = val;
      else throw ParseError("unknown " + kind + " key '" + key + "'", 0);
    }
    if (kind == "bern") {
      if (p.empty()) throw ParseError("bern needs p", 0);
      return bernoulli(parse_double(p, "bern"), seed);
    }
    if (alpha.empty() || hi.empty()) throw ParseError("rot needs alpha and hi", 0);
    return rotation(parse_constant(alpha, "alpha"), parse_constant(lo, "lo"), parse_constant(hi, "hi"),
                    parse_constant(x0, "x0"));
  }
  throw ParseError("unknown index set '" + s + "'", 0);
}

IndexSet IndexSet::read_rle1(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header.rfind("RLE1:", 0) != 0) throw ParseError("missing RLE1 header", 0);
  std::int64_t N = -1;
  int bit = -1;
  for (const auto& kv : split(header.substr(5), ',')) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw ParseError("bad RLE1 header", 0);
    if (kv.substr(0, eq) == "N") N = parse_i64(kv.substr(eq + 1), "RLE1");
    if (kv.substr(0, eq) == "first") bit = static_cast<int>(parse_i64(kv.substr(eq + 1), "RLE1"));
  }
  if (N < 0 || (bit != 0 && bit != 1)) throw ParseError("bad RLE1 header", 0);
  std::vector<std::uint8_t> bits;
  bits.reserve(static_cast<std::size_t>(N));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::int64_t run = parse_i64(line, "RLE1");
    if (run < 0 || static_cast<std::int64_t>(bits.size()) + run > N) throw ParseError("RLE1 run overflows N", 0);
    bits.insert(bits.end(), static_cast<std::size_t>(run), static_cast<std::uint8_t>(bit));
    bit ^= 1;
  }
  if (static_cast<std::int64_t>(bits.size()) != N) throw ParseError("RLE1 runs do not sum to N", 0);
  return mask(std::move(bits), false);
}

bool IndexSet::rot_contains(std::int64_t n) const {
  const Rot& r = *rot_;
  if (r.all_rational) {
    Rational y = r.q_x0 + Rational(n) * r.q_alpha;
    y = y - Rational(y.floor());
    return r.q_lo <= y && y < r.q_hi;
  }
  Quad y = r.f_x0 + static_cast<Quad>(n) * r.f_alpha;
  Quad err = r.f_err * static_cast<Quad>(n + 4) + fabsq(y) * static_cast<Quad>(0x1p-110L);
  Quad frac = y - floorq(y);
  auto near = [&](Quad e) {
    Quad d = fabsq(frac - e);
    return d <= 2 * err || fabsq(d - 1) <= 2 * err;
  };
  // Side of y relative to the endpoint e modulo 1: +1 if frac(y) >= e.
  auto side = [&](const Coef& ce, const HardyExpr& ee, Quad fe) -> int {
    Quad shift = roundq(y - fe);
    if (r.exact) {
      Coef z = r.c_x0 + Coef::rational(Rational(n)) * r.c_alpha - ce -
               Coef::rational(Rational(static_cast<std::int64_t>(shift)));
      if (z.is_zero()) return 1;
      int sg = z.sign();
      if (sg != 0) return sg;
    }
    const unsigned bits = 512;
    auto a = eval_approx<MpReal>(r.x0 + HardyExpr::constant(Rational(n)) * r.alpha - ee -
                                     HardyExpr::constant(Rational(static_cast<std::int64_t>(shift))),
                                 MpReal(bits), std::nullopt, bits);
    return RealOps<MpReal>::sign(a.value) >= 0 ? 1 : -1;
  };
  bool at_lo = near(r.f_lo);
  bool at_hi = near(r.f_hi);
  if (!at_lo && !at_hi) return frac >= r.f_lo && frac < r.f_hi;
  // Decide with exact or high-precision sides; frac(y) sits next to one endpoint.
  if (at_lo) {
    int s = side(r.c_lo, r.lo, r.f_lo);
    if (r.f_lo == 0) return s >= 0 || r.f_hi >= 1;  // frac just below 1 wraps
    return s >= 0;
  }
  int s = side(r.c_hi, r.hi, r.f_hi);
  if (r.f_hi >= 1) return s < 0 || r.f_lo <= 0;
  return s < 0;
}

bool IndexSet::contains(std::int64_t n) const {
  if (n < 1) return false;
  switch (kind_) {
    case Kind::Natural:
      return true;
    case Kind::Progression:
      return n >= offset_ && (n - offset_) % step_ == 0;
    case Kind::Rotation:
      return rot_contains(n);
    case Kind::Bernoulli:
      return hash_uniform(seed_, static_cast<std::uint64_t>(n)) < p_;
    case Kind::Champernowne:
      return champernowne_bit(n);
    case Kind::Blocks: {
      int j = 63 - __builtin_clzll(static_cast<unsigned long long>(n));
      return j % 2 == 0;
    }
    case Kind::Mask: {
      const auto& b = *bits_;
      if (repeat_) return b[static_cast<std::size_t>((n - 1) % static_cast<std::int64_t>(b.size()))];
      return n <= static_cast<std::int64_t>(b.size()) && b[static_cast<std::size_t>(n - 1)];
    }
  }
  return false;
}

std::vector<std::uint8_t> IndexSet::indicator(std::int64_t N) const {
  require(N >= 0, "indicator: N must be >= 0");
  std::vector<std::uint8_t> ind(static_cast<std::size_t>(N), 0);
  if (kind_ == Kind::Champernowne) {
    std::size_t i = 0;
    for (std::int64_t number = 1; i < ind.size(); ++number) {
      int L = 64 - __builtin_clzll(static_cast<unsigned long long>(number));
      for (int b = L - 1; b >= 0 && i < ind.size(); --b) ind[i++] = (number >> b) & 1;
    }
    return ind;
  }
  for (std::int64_t n = 1; n <= N; ++n) ind[static_cast<std::size_t>(n - 1)] = contains(n) ? 1 : 0;
  return ind;
}

std::vector<std::int64_t> IndexSet::elements(std::int64_t N) const {
  std::vector<std::int64_t> out;
  auto ind = indicator(N);
  for (std::size_t i = 0; i < ind.size(); ++i)
    if (ind[i]) out.push_back(static_cast<std::int64_t>(i) + 1);
  return out;
}

std::vector<std::int64_t> IndexSet::first(std::int64_t count, std::int64_t limit) const {
  std::vector<std::int64_t> out;
  for (std::int64_t n = 1; n <= limit && static_cast<std::int64_t>(out.size()) < count; ++n)
    if (contains(n)) out.push_back(n);
  return out;
}

double IndexSet::nominal_density() const {
  switch (kind_) {
    case Kind::Natural: return 1.0;
    case Kind::Progression: return 1.0 / static_cast<double>(step_);
    case Kind::Rotation: return static_cast<double>(rot_->f_hi - rot_->f_lo);
    case Kind::Bernoulli: return p_;
    case Kind::Champernowne: return 0.5;
    case Kind::Blocks: return -1.0;
    case Kind::Mask: {
      if (!repeat_) return 0.0;
      double ones = 0;
      for (auto b : *bits_) ones += b;
      return ones / static_cast<double>(bits_->size());
    }
  }
  return -1.0;
}

std::string IndexSet::str() const { return spec_; }

std::vector<std::int64_t> geometric_checkpoints(std::int64_t start, std::int64_t N, int per_doubling) {
  require(N >= 1 && start >= 1 && per_doubling >= 1, "checkpoints: need N, start, per_doubling >= 1");
  std::vector<std::int64_t> out;
  const double ratio = std::exp2(1.0 / per_doubling);
  for (int j = 0;; ++j) {
    double v = static_cast<double>(start) * std::pow(ratio, j);
    auto c = static_cast<std::int64_t>(std::llround(v));
    if (c >= N) break;
    if (out.empty() || c > out.back()) out.push_back(c);
  }
  out.push_back(N);
  return out;
}

DensityTrace density_trace(const std::vector<std::uint8_t>& ind, const std::vector<std::int64_t>& checkpoints,
                           double tolerance) {
  require(!checkpoints.empty(), "density: empty checkpoint schedule");
  require(checkpoints.back() <= static_cast<std::int64_t>(ind.size()), "density: indicator shorter than N");
  DensityTrace t;
  t.checkpoints = checkpoints;
  t.tolerance = tolerance;
  std::int64_t count = 0;
  std::size_t next = 0;
  for (std::int64_t n = 1; n <= checkpoints.back() && next < checkpoints.size(); ++n) {
    count += ind[static_cast<std::size_t>(n - 1)];
    while (next < checkpoints.size() && checkpoints[next] == n) {
      t.counts.push_back(count);
      t.density.push_back(static_cast<double>(count) / static_cast<double>(n));
      ++next;
    }
  }
  t.value = t.density.back();
  t.band = band_of(t.checkpoints, t.counts);
  t.converged = t.band < tolerance;
  return t;
}

DensityTrace density(const IndexSet& A, std::int64_t N, const std::vector<std::int64_t>& checkpoints,
                     double tolerance) {
  require(N >= 1, "density: N must be >= 1");
  std::vector<std::int64_t> cps = checkpoints.empty() ? geometric_checkpoints(1, N) : checkpoints;
  require(cps.back() == N, "density: last checkpoint must equal N");
  return density_trace(A.indicator(N), cps, tolerance);
}

IndexSet extract_Akm(const IndexSet& A, std::int64_t k, std::int64_t m, std::int64_t N) {
  if (k < 1 || k > m) throw Error(ErrorCode::InvalidArgument, "A_{k,m} needs 1 <= k <= m");
  auto ind = A.indicator(N + m);
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(N), 0);
  std::int64_t window = 0;  // card(A n [n, n+m])
  for (std::int64_t i = 0; i <= m; ++i) window += ind[static_cast<std::size_t>(i)];
  for (std::int64_t n = 1; n <= N; ++n) {
    auto i = static_cast<std::size_t>(n - 1);
    if (ind[i] && ind[i + static_cast<std::size_t>(m)] && window == k + 1) bits[i] = 1;
    if (n < N) window += ind[i + static_cast<std::size_t>(m) + 1] - ind[i];
  }
  return IndexSet::mask(std::move(bits), false);
}

const char* word_verdict_name(WordVerdict v) {
  switch (v) {
    case WordVerdict::Converged: return "density-converged";
    case WordVerdict::Oscillating: return "oscillating";
    case WordVerdict::Rare: return "rare";
  }
  return "?";
}

const char* regularity_name(Regularity r) {
  switch (r) {
    case Regularity::Regular: return "regular";
    case Regularity::WeaklyRegular: return "weakly-regular";
    case Regularity::Irregular: return "irregular";
  }
  return "?";
}

WordStats regularity_report(const IndexSet& A, int K, std::int64_t N, double tolerance, std::int64_t rare_count) {
  if (K < 0 || K > 12) throw GuardExceeded("regularity_report: K must lie in [0, 12]");
  require(N >= 10, "regularity_report: N must be >= 10");
  WordStats ws;
  ws.K = K;
  ws.N = N;
  ws.tolerance = tolerance;
  ws.rare_count = rare_count;
  ws.checkpoints = geometric_checkpoints(1, N);
  auto ind = A.indicator(N + K + 1);
  ws.set_density = density_trace(ind, ws.checkpoints, tolerance);

  const std::size_t C = ws.checkpoints.size();
  std::vector<std::vector<std::vector<std::int64_t>>> by_len(static_cast<std::size_t>(K + 2));
  for (int L = 1; L <= K + 1; ++L) {
    const std::uint32_t size = 1U << L;
    const std::uint32_t mask = size - 1;
    std::vector<std::int64_t> counts(size, 0);
    auto& snap = by_len[static_cast<std::size_t>(L)];
    snap.assign(size, std::vector<std::int64_t>(C, 0));
    std::uint32_t code = 0;
    for (int j = 0; j < L - 1; ++j) code = (code << 1) | ind[static_cast<std::size_t>(j)];
    std::size_t next = 0;
    for (std::int64_t n = 1; n <= N; ++n) {
      code = ((code << 1) | ind[static_cast<std::size_t>(n + L - 2)]) & mask;
      ++counts[code];
      while (next < C && ws.checkpoints[next] == n) {
        for (std::uint32_t w = 0; w < size; ++w) snap[w][next] = counts[w];
        ++next;
      }
    }
    for (std::uint32_t w = 0; w < size; ++w) {
      WordEntry e;
      e.word = verdict_word(w, L);
      e.counts = snap[w];
      e.density = static_cast<double>(e.counts.back()) / static_cast<double>(N);
      e.band = band_of(ws.checkpoints, e.counts);
      if (e.counts.back() == 0)
        e.verdict = WordVerdict::Converged;
      else if (e.counts.back() < rare_count)
        e.verdict = WordVerdict::Rare;
      else
        e.verdict = e.band < tolerance ? WordVerdict::Converged : WordVerdict::Oscillating;
      switch (e.verdict) {
        case WordVerdict::Converged: ++ws.converged; break;
        case WordVerdict::Oscillating: ++ws.oscillating; break;
        case WordVerdict::Rare: ++ws.rare; break;
      }
      ws.words.push_back(std::move(e));
    }
  }

  // A_{k,m} from the words of length m+1 with both ends in A and k+1 ones.
  bool akm_ok = true;
  for (int m = 1; m <= K; ++m) {
    const int L = m + 1;
    for (int k = 1; k <= m; ++k) {
      std::vector<std::int64_t> counts(C, 0);
      for (std::uint32_t w = 0; w < (1U << L); ++w) {
        bool ends = (w >> m) & 1U && (w & 1U);
        if (!ends || __builtin_popcount(w) != k + 1) continue;
        const auto& s = by_len[static_cast<std::size_t>(L)][w];
        for (std::size_t c = 0; c < C; ++c) counts[c] += s[c];
      }
      AkmEntry a;
      a.k = k;
      a.m = m;
      a.density = static_cast<double>(counts.back()) / static_cast<double>(N);
      a.band = band_of(ws.checkpoints, counts);
      a.converged = a.band < tolerance;
      akm_ok = akm_ok && a.converged;
      ws.akm.push_back(a);
    }
  }

  const bool dens_ok = ws.set_density.converged && ws.set_density.value > 0;
  if (dens_ok && ws.oscillating == 0)
    ws.verdict = Regularity::Regular;
  else if (dens_ok && akm_ok)
    ws.verdict = Regularity::WeaklyRegular;
  else
    ws.verdict = Regularity::Irregular;
  return ws;
}

void write_elements(std::ostream& out, const IndexSet& A, std::int64_t N) {
  for (auto v : A.elements(N)) out << v << '\n';
}

void write_rle1(std::ostream& out, const IndexSet& A, std::int64_t N) {
  auto ind = A.indicator(N);
  const int first = ind.empty() ? 0 : ind[0];
  out << "RLE1:N=" << N << ",first=" << first << '\n';
  std::size_t i = 0;
  while (i < ind.size()) {
    std::size_t j = i;
    while (j < ind.size() && ind[j] == ind[i]) ++j;
    out << (j - i) << '\n';
    i = j;
  }
}

}  // namespace ergolab
