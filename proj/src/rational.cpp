#include "ergolab/rational.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ergolab {
namespace {

using i128 = __int128;

constexpr i128 kMax = std::numeric_limits<std::int64_t>::max();

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::optional<Rational> from128(i128 num, i128 den) {
  if (den == 0) return std::nullopt;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num > kMax || num < -kMax || den > kMax) return std::nullopt;
  return Rational::make(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

Rational checked(std::optional<Rational> r) {
  if (!r) throw std::overflow_error("rational overflow");
  return *r;
}

}  // namespace

std::optional<Rational> Rational::make(std::int64_t num, std::int64_t den) {
  if (den == 0) return std::nullopt;
  if (num == std::numeric_limits<std::int64_t>::min() || den == std::numeric_limits<std::int64_t>::min())
    return std::nullopt;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num, den);
  Rational r;
  r.num_ = g > 1 ? num / g : num;
  r.den_ = g > 1 ? den / g : den;
  return r;
}

Rational Rational::of(std::int64_t num, std::int64_t den) {
  auto r = make(num, den);
  if (!r) throw std::invalid_argument("invalid rational");
  return *r;
}

std::optional<Rational> Rational::parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool neg = false;
  std::size_t i = 0;
  if (text[0] == '-' || text[0] == '+') {
    neg = text[0] == '-';
    i = 1;
  }
  auto slash = text.find('/', i);
  if (slash != std::string_view::npos) {
    auto a = parse(text.substr(i, slash - i));
    auto b = parse(text.substr(slash + 1));
    if (!a || !b || b->is_zero()) return std::nullopt;
    auto q = try_div(*a, *b);
    if (q && neg) q = -*q;
    return q;
  }
  i128 num = 0;
  i128 den = 1;
  bool seen_dot = false;
  bool any_digit = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.') {
      if (seen_dot) return std::nullopt;
      seen_dot = true;
      continue;
    }
    if (c < '0' || c > '9') return std::nullopt;
    any_digit = true;
    num = num * 10 + (c - '0');
    if (seen_dot) den *= 10;
    if (num > kMax || den > kMax) return std::nullopt;
  }
  if (!any_digit) return std::nullopt;
  return from128(neg ? -num : num, den);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::int64_t Rational::floor() const {
  std::int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ < 0) --q;
  return q;
}

std::optional<Rational> Rational::try_add(const Rational& a, const Rational& b) {
  return from128(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
                 static_cast<i128>(a.den_) * b.den_);
}

std::optional<Rational> Rational::try_sub(const Rational& a, const Rational& b) {
  return from128(static_cast<i128>(a.num_) * b.den_ - static_cast<i128>(b.num_) * a.den_,
                 static_cast<i128>(a.den_) * b.den_);
}

std::optional<Rational> Rational::try_mul(const Rational& a, const Rational& b) {
  return from128(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
}

std::optional<Rational> Rational::try_div(const Rational& a, const Rational& b) {
  if (b.num_ == 0) return std::nullopt;
  return from128(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_);
}

std::optional<std::int64_t> exact_root(std::int64_t value, std::int64_t k) {
  if (k <= 0 || value < 0) return std::nullopt;
  if (k == 1 || value <= 1) return value;
  auto guess = static_cast<std::int64_t>(std::llround(std::pow(static_cast<long double>(value), 1.0L / k)));
  for (std::int64_t c = std::max<std::int64_t>(0, guess - 1); c <= guess + 1; ++c) {
    i128 p = 1;
    bool over = false;
    for (std::int64_t j = 0; j < k; ++j) {
      p *= c;
      if (p > value) {
        over = true;
        break;
      }
    }
    if (!over && p == value) return c;
  }
  return std::nullopt;
}

std::optional<Rational> Rational::try_pow(const Rational& a, const Rational& e) {
  const std::int64_t p = e.num_;
  const std::int64_t q = e.den_;
  if (p == 0) return Rational(1);
  if (a.num_ == 0) return p > 0 ? std::optional<Rational>(Rational(0)) : std::nullopt;
  if (q > 64) return std::nullopt;
  Rational base = a;
  if (q > 1) {
    if (a.num_ < 0) return std::nullopt;
    auto rn = exact_root(a.num_, q);
    auto rd = exact_root(a.den_, q);
    if (!rn || !rd) return std::nullopt;
    base = Rational::of(*rn, *rd);
  }
  std::int64_t n = p < 0 ? -p : p;
  if (n > 128) return std::nullopt;
  std::optional<Rational> out = Rational(1);
  for (std::int64_t j = 0; j < n && out; ++j) out = try_mul(*out, base);
  if (!out) return std::nullopt;
  if (p < 0) return try_div(Rational(1), *out);
  return out;
}

Rational operator+(const Rational& a, const Rational& b) { return checked(Rational::try_add(a, b)); }
Rational operator-(const Rational& a, const Rational& b) { return checked(Rational::try_sub(a, b)); }
Rational operator*(const Rational& a, const Rational& b) { return checked(Rational::try_mul(a, b)); }
Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw std::domain_error("division by zero");
  return checked(Rational::try_div(a, b));
}

Rational Rational::operator-() const {
  Rational r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<i128>(a.num_) * b.den_ < static_cast<i128>(b.num_) * a.den_;
}

}  // namespace ergolab
