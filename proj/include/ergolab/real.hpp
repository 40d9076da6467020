#pragma once

// Precision tiers used by the evaluator: long double (64-bit mantissa),
// __float128 (113-bit mantissa) and MPFR at a caller-chosen precision.

#include <mpfr.h>
#include <quadmath.h>

#include <cmath>
#include <cstdint>
#include <string>

#include "ergolab/rational.hpp"

namespace ergolab {

using Quad = __float128;

enum class NamedConst { Sqrt2, Sqrt3, Sqrt5, Phi, Pi, E };

const char* named_const_name(NamedConst c);

/// RAII wrapper over mpfr_t. Binary operations round to the larger operand
/// precision.
class MpReal {
 public:
  explicit MpReal(unsigned bits = 128);
  MpReal(long double v, unsigned bits);
  MpReal(const MpReal& other);
  MpReal(MpReal&& other) noexcept;
  MpReal& operator=(const MpReal& other);
  MpReal& operator=(MpReal&& other) noexcept;
  ~MpReal();

  static MpReal from_string(const std::string& text, unsigned bits);
  static MpReal from_quad(Quad q, unsigned bits);
  static MpReal from_int(std::int64_t v, unsigned bits);

  unsigned bits() const { return static_cast<unsigned>(mpfr_get_prec(v_)); }
  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  long double to_ld() const { return mpfr_get_ld(v_, MPFR_RNDN); }
  /// Decimal representation with `digits` significant digits.
  std::string str(int digits) const;

  friend MpReal operator+(const MpReal& a, const MpReal& b);
  friend MpReal operator-(const MpReal& a, const MpReal& b);
  friend MpReal operator*(const MpReal& a, const MpReal& b);
  friend MpReal operator/(const MpReal& a, const MpReal& b);
  MpReal operator-() const;

  friend bool operator<(const MpReal& a, const MpReal& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const MpReal& a, const MpReal& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const MpReal& a, const MpReal& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const MpReal& a, const MpReal& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
  friend bool operator==(const MpReal& a, const MpReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

 private:
  mpfr_t v_;
};

unsigned digits_to_bits(int decimal_digits);

/// Uniform interface over the three tiers. `Ctx` carries the working
/// precision in bits (ignored by the fixed-width tiers).
template <class R>
struct RealOps;

template <>
struct RealOps<long double> {
  using R = long double;
  static R unit_roundoff(unsigned) { return 0x1p-64L; }
  static R from_ld(long double v, unsigned) { return v; }
  static R from_int(std::int64_t v, unsigned) { return static_cast<R>(v); }
  static R from_rational(const Rational& q, unsigned) {
    return static_cast<R>(q.num()) / static_cast<R>(q.den());
  }
  static R named(NamedConst c, unsigned);
  static R log(const R& x) { return std::log(x); }
  static R log1p(const R& x) { return std::log1p(x); }
  static R exp(const R& x) { return std::exp(x); }
  static R expm1(const R& x) { return std::expm1(x); }
  static R pow(const R& x, const R& y) { return std::pow(x, y); }
  static R abs(const R& x) { return std::fabs(x); }
  static R floor(const R& x) { return std::floor(x); }
  static bool finite(const R& x) { return std::isfinite(x); }
  static long double to_ld(const R& x) { return x; }
  static int sign(const R& x) { return (x > 0) - (x < 0); }
};

template <>
struct RealOps<Quad> {
  using R = Quad;
  static R unit_roundoff(unsigned) { return static_cast<R>(0x1p-113L); }
  static R from_ld(long double v, unsigned) { return static_cast<R>(v); }
  static R from_int(std::int64_t v, unsigned) { return static_cast<R>(v); }
  static R from_rational(const Rational& q, unsigned) {
    return static_cast<R>(q.num()) / static_cast<R>(q.den());
  }
  static R named(NamedConst c, unsigned);
  static R log(const R& x) { return logq(x); }
  static R log1p(const R& x) { return log1pq(x); }
  static R exp(const R& x) { return expq(x); }
  static R expm1(const R& x) { return expm1q(x); }
  static R pow(const R& x, const R& y) { return powq(x, y); }
  static R abs(const R& x) { return fabsq(x); }
  static R floor(const R& x) { return floorq(x); }
  static bool finite(const R& x) { return finiteq(x) != 0; }
  static long double to_ld(const R& x) { return static_cast<long double>(x); }
  static int sign(const R& x) { return (x > 0) - (x < 0); }
};

template <>
struct RealOps<MpReal> {
  using R = MpReal;
  static R unit_roundoff(unsigned bits);
  static R from_ld(long double v, unsigned bits) { return MpReal(v, bits); }
  static R from_int(std::int64_t v, unsigned bits) { return MpReal::from_int(v, bits); }
  static R from_rational(const Rational& q, unsigned bits);
  static R named(NamedConst c, unsigned bits);
  static R log(const R& x);
  static R log1p(const R& x);
  static R exp(const R& x);
  static R expm1(const R& x);
  static R pow(const R& x, const R& y);
  static R abs(const R& x);
  static R floor(const R& x);
  static bool finite(const R& x) { return mpfr_number_p(x.raw()) != 0; }
  static long double to_ld(const R& x) { return x.to_ld(); }
  static int sign(const R& x) { return mpfr_sgn(x.raw()); }
};

std::string quad_to_string(Quad q, int digits = 36);

}  // namespace ergolab
