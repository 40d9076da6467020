#include "ergolab/normal_form.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "ergolab/errors.hpp"

namespace ergolab {
namespace {

// Thrown while building a normal form when the input leaves the class.
struct NotRepresentable {};

constexpr int kPiIdx = 3;
constexpr int kEIdx = 4;
constexpr std::int64_t kSqrtBase[3] = {2, 3, 5};

bool empty_monomial(const Coef::Monomial& m) {
  for (int v : m)
    if (v != 0) return false;
  return true;
}

MpReal monomial_value(const Coef::Monomial& m, unsigned bits) {
  using O = RealOps<MpReal>;
  MpReal v = MpReal::from_int(1, bits);
  const NamedConst sym[5] = {NamedConst::Sqrt2, NamedConst::Sqrt3, NamedConst::Sqrt5, NamedConst::Pi, NamedConst::E};
  for (int i = 0; i < 5; ++i) {
    if (m[i] == 0) continue;
    MpReal c = O::named(sym[i], bits);
    int k = m[i] < 0 ? -m[i] : m[i];
    for (int j = 0; j < k; ++j) v = m[i] > 0 ? v * c : v / c;
  }
  return v;
}

// Writes n = s^2 * m with m | 30; nullopt if n has another squarefree factor.
std::optional<std::pair<std::int64_t, std::int64_t>> split_square(std::int64_t n) {
  if (n <= 0) return std::nullopt;
  std::int64_t m = 1;
  std::int64_t s = 1;
  for (std::int64_t p : {2, 3, 5}) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e % 2) m *= p;
    for (int j = 0; j < e / 2; ++j) s *= p;
  }
  auto r = exact_root(n, 2);
  if (!r) return std::nullopt;
  return std::make_pair(s * *r, m);
}

Coef monomial_coef(const Coef::Monomial& m, const Rational& q) {
  Coef c = Coef::rational(q);
  const NamedConst sym[5] = {NamedConst::Sqrt2, NamedConst::Sqrt3, NamedConst::Sqrt5, NamedConst::Pi, NamedConst::E};
  for (int i = 0; i < 5; ++i) {
    Coef s = Coef::named(sym[i]);
    if (m[i] < 0) s = s.inverse();
    int k = m[i] < 0 ? -m[i] : m[i];
    for (int j = 0; j < k; ++j) c = c * s;
  }
  return c;
}

}  // namespace

const char* rationality_name(Rationality r) {
  switch (r) {
    case Rationality::Rational: return "rational";
    case Rationality::Irrational: return "irrational";
    case Rationality::Unknown: return "unknown";
  }
  return "?";
}

Coef Coef::rational(const Rational& q, bool decimal) {
  Coef c;
  if (!q.is_zero()) c.terms_[Monomial{}] = q;
  c.decimal_ = decimal;
  return c;
}

Coef Coef::named(NamedConst nc) {
  Coef c;
  switch (nc) {
    case NamedConst::Sqrt2: c.terms_[Monomial{1, 0, 0, 0, 0}] = 1; break;
    case NamedConst::Sqrt3: c.terms_[Monomial{0, 1, 0, 0, 0}] = 1; break;
    case NamedConst::Sqrt5: c.terms_[Monomial{0, 0, 1, 0, 0}] = 1; break;
    case NamedConst::Phi:
      c.terms_[Monomial{}] = Rational::of(1, 2);
      c.terms_[Monomial{0, 0, 1, 0, 0}] = Rational::of(1, 2);
      break;
    case NamedConst::Pi: c.terms_[Monomial{0, 0, 0, 1, 0}] = 1; break;
    case NamedConst::E: c.terms_[Monomial{0, 0, 0, 0, 1}] = 1; break;
  }
  return c;
}

Coef Coef::approximate(long double v) {
  Coef c;
  c.approx_ = v;
  return c;
}

bool Coef::is_zero() const { return approx_ ? *approx_ == 0.0L : terms_.empty(); }

MpReal Coef::mp_value(unsigned bits) const {
  if (approx_) return MpReal(*approx_, bits);
  MpReal v = MpReal::from_int(0, bits);
  for (const auto& [m, q] : terms_) v = v + RealOps<MpReal>::from_rational(q, bits) * monomial_value(m, bits);
  return v;
}

long double Coef::value() const { return approx_ ? *approx_ : mp_value(192).to_ld(); }

int Coef::sign() const {
  if (approx_) return (*approx_ > 0) - (*approx_ < 0);
  if (terms_.empty()) return 0;
  if (terms_.size() == 1 && empty_monomial(terms_.begin()->first)) return terms_.begin()->second.sign();
  return RealOps<MpReal>::sign(mp_value(320));
}

std::optional<Rational> Coef::as_rational() const {
  if (approx_) return std::nullopt;
  if (terms_.empty()) return Rational(0);
  if (terms_.size() == 1 && empty_monomial(terms_.begin()->first)) return terms_.begin()->second;
  return std::nullopt;
}

Rationality Coef::rationality() const {
  if (approx_ || decimal_) return Rationality::Unknown;
  if (as_rational()) return Rationality::Rational;
  bool pi = false;
  bool e = false;
  for (const auto& [m, q] : terms_) {
    pi = pi || m[kPiIdx] != 0;
    e = e || m[kEIdx] != 0;
  }
  // Products of distinct square roots of 2, 3, 5 are linearly independent over
  // Q, and a nonzero Laurent polynomial in a single transcendental cannot be
  // rational. Mixed pi/e expressions are not decided.
  if (pi && e) return Rationality::Unknown;
  return Rationality::Irrational;
}

Coef Coef::operator-() const {
  Coef c = *this;
  if (c.approx_) *c.approx_ = -*c.approx_;
  for (auto& [m, q] : c.terms_) q = -q;
  return c;
}

namespace {

Coef approx_result(long double v, long double scale) {
  if (std::fabs(v) <= 1e-15L * scale) throw NotRepresentable{};
  return Coef::approximate(v);
}

}  // namespace

Coef operator+(const Coef& a, const Coef& b) {
  if (a.approx_ || b.approx_) {
    long double va = a.value();
    long double vb = b.value();
    return approx_result(va + vb, std::fabs(va) + std::fabs(vb));
  }
  Coef c = a;
  c.decimal_ = a.decimal_ || b.decimal_;
  for (const auto& [m, q] : b.terms_) {
    auto it = c.terms_.find(m);
    if (it == c.terms_.end()) {
      c.terms_[m] = q;
    } else {
      it->second = it->second + q;
      if (it->second.is_zero()) c.terms_.erase(it);
    }
  }
  return c;
}

Coef operator-(const Coef& a, const Coef& b) { return a + (-b); }

Coef operator*(const Coef& a, const Coef& b) {
  if (a.approx_ || b.approx_) return Coef::approximate(a.value() * b.value());
  Coef c;
  c.decimal_ = a.decimal_ || b.decimal_;
  for (const auto& [ma, qa] : a.terms_) {
    for (const auto& [mb, qb] : b.terms_) {
      Coef::Monomial m{};
      Rational q = qa * qb;
      for (int i = 0; i < 5; ++i) {
        m[i] = ma[i] + mb[i];
        if (i < 3 && m[i] == 2) {
          m[i] = 0;
          q = q * Rational(kSqrtBase[i]);
        }
      }
      Coef term;
      term.terms_[m] = q;
      c = c + term;
    }
  }
  return c;
}

bool operator==(const Coef& a, const Coef& b) {
  return a.terms_ == b.terms_ && a.approx_ == b.approx_ && a.decimal_ == b.decimal_;
}

Coef Coef::inverse() const {
  if (is_zero()) throw DomainError("inverse of a zero coefficient");
  if (approx_ || terms_.size() != 1) return Coef::approximate(1.0L / value());
  const auto& [m, q] = *terms_.begin();
  Rational r = Rational(1) / q;
  Monomial inv{};
  for (int i = 0; i < 5; ++i) {
    if (i < 3) {
      inv[i] = m[i];
      if (m[i]) r = r / Rational(kSqrtBase[i]);
    } else {
      inv[i] = -m[i];
    }
  }
  Coef c;
  c.terms_[inv] = r;
  c.decimal_ = decimal_;
  return c;
}

Coef Coef::pow(const Rational& r) const {
  if (r.is_integer()) {
    std::int64_t k = r.num();
    if (k < 0) return inverse().pow(Rational(-k));
    if (k > 64) {
      if (approx_ || !as_rational()) return Coef::approximate(std::pow(value(), static_cast<long double>(k)));
    }
    Coef c = Coef::rational(1);
    for (std::int64_t j = 0; j < k; ++j) c = c * *this;
    return c;
  }
  if (sign() <= 0) throw NotRepresentable{};
  if (auto q = as_rational()) {
    if (auto exact = Rational::try_pow(*q, r)) return Coef::rational(*exact, decimal_);
    if (r.den() == 2) {
      auto nd = Rational::try_mul(Rational(q->num()), Rational(q->den()));
      if (nd && nd->is_integer()) {
        if (auto sm = split_square(nd->num())) {
          Monomial m{};
          if (sm->second % 2 == 0) m[0] = 1;
          if (sm->second % 3 == 0) m[1] = 1;
          if (sm->second % 5 == 0) m[2] = 1;
          Coef root = monomial_coef(m, Rational::of(sm->first, q->den()));
          root.decimal_ = decimal_;
          return root.pow(Rational(r.num()));
        }
      }
    }
  }
  return Coef::approximate(std::pow(value(), r.to_ld()));
}

Coef Coef::log() const {
  if (sign() <= 0) throw NotRepresentable{};
  if (auto q = as_rational(); q && *q == Rational(1)) return Coef{};
  return Coef::approximate(std::log(value()));
}

HardyExpr Coef::to_expr() const {
  if (approx_) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17Lg", *approx_);
    auto q = Rational::parse(buf);
    if (!q) {
      // Exponent notation or too many digits: fall back to a scaled fraction.
      long double v = *approx_;
      std::int64_t den = 1000000000000LL;
      q = Rational::make(static_cast<std::int64_t>(std::llround(v * den)), den);
    }
    return HardyExpr::constant(q ? *q : Rational(0), true);
  }
  HardyExpr sum = HardyExpr::constant(0);
  bool first = true;
  const NamedConst sym[5] = {NamedConst::Sqrt2, NamedConst::Sqrt3, NamedConst::Sqrt5, NamedConst::Pi, NamedConst::E};
  for (const auto& [m, q] : terms_) {
    HardyExpr term = HardyExpr::constant(q, decimal_);
    for (int i = 0; i < 5; ++i) {
      if (m[i] == 0) continue;
      HardyExpr s = HardyExpr::named(sym[i]);
      if (m[i] == 1) {
        term = term * s;
      } else if (m[i] > 0) {
        term = term * ergolab::pow(s, Rational(m[i]));
      } else {
        term = term / ergolab::pow(s, Rational(-m[i]));
      }
    }
    sum = first ? term : sum + term;
    first = false;
  }
  return sum;
}

std::string Coef::str() const { return to_expr().str(); }

std::strong_ordering operator<=>(const Scale& a, const Scale& b) {
  if (a.alpha != b.alpha) return a.alpha < b.alpha ? std::strong_ordering::less : std::strong_ordering::greater;
  if (a.beta != b.beta) return a.beta < b.beta ? std::strong_ordering::less : std::strong_ordering::greater;
  if (a.gamma != b.gamma) return a.gamma < b.gamma ? std::strong_ordering::less : std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Scale::str() const { return "(" + alpha.str() + "," + beta.str() + "," + gamma.str() + ")"; }

NormalForm NormalForm::constant(const Coef& c) { return term(c, kConstantScale); }

NormalForm NormalForm::term(const Coef& c, const Scale& s) {
  NormalForm f;
  f.add_term(s, c);
  return f;
}

void NormalForm::add_term(const Scale& s, const Coef& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(s);
  if (it == terms_.end()) {
    terms_.emplace(s, c);
    return;
  }
  it->second = it->second + c;
  if (it->second.is_zero()) terms_.erase(it);
}

std::pair<Scale, Coef> NormalForm::leading() const {
  if (terms_.empty()) throw Error(ErrorCode::Internal, "leading term of zero");
  return *terms_.rbegin();
}

std::optional<Scale> NormalForm::order() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.rbegin()->first;
}

NormalForm NormalForm::derivative() const {
  NormalForm d;
  for (const auto& [s, c] : terms_) {
    Rational a1 = s.alpha - Rational(1);
    if (!s.alpha.is_zero()) d.add_term({a1, s.beta, s.gamma}, c * Coef::rational(s.alpha));
    if (!s.beta.is_zero()) d.add_term({a1, s.beta - Rational(1), s.gamma}, c * Coef::rational(s.beta));
    if (!s.gamma.is_zero())
      d.add_term({a1, s.beta - Rational(1), s.gamma - Rational(1)}, c * Coef::rational(s.gamma));
  }
  return d;
}

NormalForm NormalForm::derivative(int k) const {
  NormalForm d = *this;
  for (int j = 0; j < k; ++j) d = d.derivative();
  return d;
}

NormalForm NormalForm::without_vanishing() const {
  NormalForm f;
  for (const auto& [s, c] : terms_)
    if (s >= kConstantScale) f.terms_.emplace(s, c);
  return f;
}

NormalForm NormalForm::polynomial_part() const {
  NormalForm f;
  for (const auto& [s, c] : terms_)
    if (s.alpha.is_integer() && s.alpha.sign() >= 0 && s.beta.is_zero() && s.gamma.is_zero()) f.terms_.emplace(s, c);
  return f;
}

NormalForm NormalForm::operator-() const {
  NormalForm f;
  for (const auto& [s, c] : terms_) f.terms_.emplace(s, -c);
  return f;
}

NormalForm operator+(const NormalForm& a, const NormalForm& b) {
  NormalForm f = a;
  for (const auto& [s, c] : b.terms_) f.add_term(s, c);
  return f;
}

NormalForm operator-(const NormalForm& a, const NormalForm& b) { return a + (-b); }

NormalForm operator*(const NormalForm& a, const NormalForm& b) {
  NormalForm f;
  for (const auto& [sa, ca] : a.terms_)
    for (const auto& [sb, cb] : b.terms_)
      f.add_term({sa.alpha + sb.alpha, sa.beta + sb.beta, sa.gamma + sb.gamma}, ca * cb);
  return f;
}

NormalForm NormalForm::scaled(const Coef& c) const {
  NormalForm f;
  for (const auto& [s, k] : terms_) f.add_term(s, k * c);
  return f;
}

std::optional<NormalForm> NormalForm::divided(const NormalForm& d) const {
  if (d.terms_.size() != 1) return std::nullopt;
  const auto& [s, c] = *d.terms_.begin();
  NormalForm inv = term(c.inverse(), {-s.alpha, -s.beta, -s.gamma});
  return *this * inv;
}

std::optional<NormalForm> NormalForm::pow(const Rational& r) const {
  if (terms_.empty()) {
    if (r.sign() > 0) return NormalForm{};
    return std::nullopt;
  }
  if (terms_.size() == 1) {
    const auto& [s, c] = *terms_.begin();
    if (!r.is_integer() && c.sign() <= 0) return std::nullopt;
    return term(c.pow(r), {s.alpha * r, s.beta * r, s.gamma * r});
  }
  if (!r.is_integer() || r.sign() < 0 || r.num() > 8) return std::nullopt;
  NormalForm f = constant(Coef::rational(1));
  for (std::int64_t j = 0; j < r.num(); ++j) f = f * *this;
  return f;
}

namespace {

NormalForm build(const HardyExpr& e) {
  const ExprNode& n = e.node();
  switch (n.op) {
    case Op::Const: return NormalForm::constant(Coef::rational(n.value, n.decimal));
    case Op::Named: return NormalForm::constant(Coef::named(n.named));
    case Op::Var: return NormalForm::term(Coef::rational(1), {Rational(1), Rational(0), Rational(0)});
    case Op::Neg: return -build(e.lhs());
    case Op::Add: return build(e.lhs()) + build(e.rhs());
    case Op::Sub: return build(e.lhs()) - build(e.rhs());
    case Op::Mul: return build(e.lhs()) * build(e.rhs());
    case Op::Div: {
      auto q = build(e.lhs()).divided(build(e.rhs()));
      if (!q) throw NotRepresentable{};
      return *q;
    }
    case Op::Pow: {
      NormalForm ex = build(e.rhs());
      if (ex.is_zero()) return NormalForm::constant(Coef::rational(1));
      if (ex.terms().size() != 1 || !(ex.terms().begin()->first == kConstantScale)) throw NotRepresentable{};
      auto r = ex.terms().begin()->second.as_rational();
      if (!r) throw NotRepresentable{};
      auto p = build(e.lhs()).pow(*r);
      if (!p) throw NotRepresentable{};
      return *p;
    }
    case Op::Ln: {
      NormalForm a = build(e.lhs());
      if (a.terms().size() != 1) throw NotRepresentable{};
      const auto& [s, c] = *a.terms().begin();
      if (!s.gamma.is_zero() || c.sign() <= 0) throw NotRepresentable{};
      NormalForm out = NormalForm::constant(c.log());
      out = out + NormalForm::term(Coef::rational(s.alpha), {Rational(0), Rational(1), Rational(0)});
      out = out + NormalForm::term(Coef::rational(s.beta), {Rational(0), Rational(0), Rational(1)});
      return out;
    }
    case Op::Exp: throw NotRepresentable{};
  }
  throw NotRepresentable{};
}

}  // namespace

std::optional<NormalForm> NormalForm::from_expr(const HardyExpr& e) {
  try {
    return build(e);
  } catch (const NotRepresentable&) {
    return std::nullopt;
  } catch (const std::overflow_error&) {
    return std::nullopt;
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

std::optional<NormalForm> NormalForm::shift_combination(const std::vector<long long>& m) const {
  try {
    std::vector<NormalForm> derivs{*this};
    for (;;) {
      auto o = derivs.back().order();
      if (!o || *o < kConstantScale) break;
      if (derivs.size() > 18) return std::nullopt;
      derivs.push_back(derivs.back().derivative());
    }
    NormalForm out;
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (m[j] == 0) continue;
      Rational factor(1);  // j^i / i!
      for (std::size_t i = 0; i < derivs.size(); ++i) {
        if (i > 0) factor = factor * Rational(static_cast<std::int64_t>(j)) / Rational(static_cast<std::int64_t>(i));
        if (factor.is_zero()) break;
        out = out + derivs[i].scaled(Coef::rational(factor * Rational(m[j])));
      }
    }
    return out.without_vanishing();
  } catch (const NotRepresentable&) {
    return std::nullopt;
  } catch (const std::overflow_error&) {
    return std::nullopt;
  }
}

HardyExpr NormalForm::to_expr() const {
  if (terms_.empty()) return HardyExpr::constant(0);
  HardyExpr sum;
  bool first = true;
  const HardyExpr t = HardyExpr::var();
  // Highest order first, as polynomials are usually written.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [s, c] = *it;
    HardyExpr term = c.to_expr();
    auto factor = [&](const HardyExpr& base, const Rational& ex) {
      if (ex.is_zero()) return;
      term = term * (ex == Rational(1) ? base : ergolab::pow(base, ex));
    };
    factor(t, s.alpha);
    factor(ln(t), s.beta);
    factor(ln(ln(t)), s.gamma);
    sum = first ? term : sum + term;
    first = false;
  }
  return sum;
}

std::string NormalForm::str() const { return to_expr().str(); }

}  // namespace ergolab
