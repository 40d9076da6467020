#include "ergolab/real.hpp"

#include <cmath>
#include <vector>

namespace ergolab {

const char* named_const_name(NamedConst c) {
  switch (c) {
    case NamedConst::Sqrt2: return "sqrt2";
    case NamedConst::Sqrt3: return "sqrt3";
    case NamedConst::Sqrt5: return "sqrt5";
    case NamedConst::Phi: return "phi";
    case NamedConst::Pi: return "pi";
    case NamedConst::E: return "e";
  }
  return "?";
}

unsigned digits_to_bits(int decimal_digits) {
  if (decimal_digits < 1) decimal_digits = 1;
  return static_cast<unsigned>(std::ceil(decimal_digits * 3.321928094887362)) + 8;
}

MpReal::MpReal(unsigned bits) {
  mpfr_init2(v_, bits);
  mpfr_set_zero(v_, 1);
}

MpReal::MpReal(long double v, unsigned bits) {
  mpfr_init2(v_, bits);
  mpfr_set_ld(v_, v, MPFR_RNDN);
}

MpReal::MpReal(const MpReal& other) {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

MpReal::MpReal(MpReal&& other) noexcept {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_swap(v_, other.v_);
}

MpReal& MpReal::operator=(const MpReal& other) {
  if (this != &other) {
    mpfr_set_prec(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

MpReal& MpReal::operator=(MpReal&& other) noexcept {
  if (this != &other) mpfr_swap(v_, other.v_);
  return *this;
}

MpReal::~MpReal() { mpfr_clear(v_); }

MpReal MpReal::from_string(const std::string& text, unsigned bits) {
  MpReal r(bits);
  mpfr_set_str(r.v_, text.c_str(), 10, MPFR_RNDN);
  return r;
}

MpReal MpReal::from_quad(Quad q, unsigned bits) {
  auto hi = static_cast<long double>(q);
  auto lo = static_cast<long double>(q - static_cast<Quad>(hi));
  MpReal r(hi, bits < 160 ? 160 : bits);
  MpReal l(lo, 160);
  mpfr_add(r.v_, r.v_, l.v_, MPFR_RNDN);
  if (bits < 160) mpfr_prec_round(r.v_, bits, MPFR_RNDN);
  return r;
}

MpReal MpReal::from_int(std::int64_t v, unsigned bits) {
  MpReal r(bits);
  mpfr_set_si(r.v_, static_cast<long>(v), MPFR_RNDN);
  return r;
}

std::string MpReal::str(int digits) const {
  std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
  return std::string(buf.data());
}

namespace {
unsigned max_bits(const MpReal& a, const MpReal& b) { return a.bits() > b.bits() ? a.bits() : b.bits(); }
}  // namespace

MpReal operator+(const MpReal& a, const MpReal& b) {
  MpReal r(max_bits(a, b));
  mpfr_add(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}
MpReal operator-(const MpReal& a, const MpReal& b) {
  MpReal r(max_bits(a, b));
  mpfr_sub(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}
MpReal operator*(const MpReal& a, const MpReal& b) {
  MpReal r(max_bits(a, b));
  mpfr_mul(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}
MpReal operator/(const MpReal& a, const MpReal& b) {
  MpReal r(max_bits(a, b));
  mpfr_div(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}
MpReal MpReal::operator-() const {
  MpReal r(bits());
  mpfr_neg(r.v_, v_, MPFR_RNDN);
  return r;
}

long double RealOps<long double>::named(NamedConst c, unsigned) {
  switch (c) {
    case NamedConst::Sqrt2: return std::sqrt(2.0L);
    case NamedConst::Sqrt3: return std::sqrt(3.0L);
    case NamedConst::Sqrt5: return std::sqrt(5.0L);
    case NamedConst::Phi: return (1.0L + std::sqrt(5.0L)) / 2.0L;
    case NamedConst::Pi: return 3.141592653589793238462643383279502884L;
    case NamedConst::E: return 2.718281828459045235360287471352662498L;
  }
  return 0.0L;
}

Quad RealOps<Quad>::named(NamedConst c, unsigned) {
  switch (c) {
    case NamedConst::Sqrt2: return M_SQRT2q;
    case NamedConst::Sqrt3: return sqrtq(static_cast<Quad>(3));
    case NamedConst::Sqrt5: return sqrtq(static_cast<Quad>(5));
    case NamedConst::Phi: return (static_cast<Quad>(1) + sqrtq(static_cast<Quad>(5))) / static_cast<Quad>(2);
    case NamedConst::Pi: return M_PIq;
    case NamedConst::E: return M_Eq;
  }
  return static_cast<Quad>(0);
}

MpReal RealOps<MpReal>::unit_roundoff(unsigned bits) {
  MpReal r(64);
  mpfr_set_ui_2exp(r.raw(), 1, -static_cast<mpfr_exp_t>(bits), MPFR_RNDN);
  return r;
}

MpReal RealOps<MpReal>::from_rational(const Rational& q, unsigned bits) {
  MpReal n = MpReal::from_int(q.num(), bits);
  if (q.den() == 1) return n;
  MpReal d = MpReal::from_int(q.den(), bits);
  return n / d;
}

MpReal RealOps<MpReal>::named(NamedConst c, unsigned bits) {
  MpReal r(bits);
  switch (c) {
    case NamedConst::Sqrt2: mpfr_sqrt_ui(r.raw(), 2, MPFR_RNDN); break;
    case NamedConst::Sqrt3: mpfr_sqrt_ui(r.raw(), 3, MPFR_RNDN); break;
    case NamedConst::Sqrt5: mpfr_sqrt_ui(r.raw(), 5, MPFR_RNDN); break;
    case NamedConst::Phi:
      mpfr_sqrt_ui(r.raw(), 5, MPFR_RNDN);
      mpfr_add_ui(r.raw(), r.raw(), 1, MPFR_RNDN);
      mpfr_div_ui(r.raw(), r.raw(), 2, MPFR_RNDN);
      break;
    case NamedConst::Pi: mpfr_const_pi(r.raw(), MPFR_RNDN); break;
    case NamedConst::E:
      mpfr_set_ui(r.raw(), 1, MPFR_RNDN);
      mpfr_exp(r.raw(), r.raw(), MPFR_RNDN);
      break;
  }
  return r;
}

MpReal RealOps<MpReal>::log(const MpReal& x) {
  MpReal r(x.bits());
  mpfr_log(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}
MpReal RealOps<MpReal>::log1p(const MpReal& x) {
  MpReal r(x.bits());
  mpfr_log1p(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}
MpReal RealOps<MpReal>::exp(const MpReal& x) {
  MpReal r(x.bits());
  mpfr_exp(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}
MpReal RealOps<MpReal>::expm1(const MpReal& x) {
  MpReal r(x.bits());
  mpfr_expm1(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}
MpReal RealOps<MpReal>::pow(const MpReal& x, const MpReal& y) {
  MpReal r(x.bits() > y.bits() ? x.bits() : y.bits());
  mpfr_pow(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
  return r;
}
MpReal RealOps<MpReal>::abs(const MpReal& x) {
  MpReal r(x.bits());
  mpfr_abs(r.raw(), x.raw(), MPFR_RNDN);
  return r;
}
MpReal RealOps<MpReal>::floor(const MpReal& x) {
  MpReal r(x.bits());
  mpfr_floor(r.raw(), x.raw());
  return r;
}

std::string quad_to_string(Quad q, int digits) {
  char buf[128];
  quadmath_snprintf(buf, sizeof buf, "%.*Qg", digits, q);
  return buf;
}

}  // namespace ergolab
