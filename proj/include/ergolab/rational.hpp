#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ergolab {

/// Exact rational with 64-bit numerator and denominator, always reduced with a
/// positive denominator. Checked arithmetic: the `try_*` functions return
/// nullopt on overflow, the operators throw std::overflow_error.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t n) : num_(n) {}  // NOLINT(implicit)

  static std::optional<Rational> make(std::int64_t num, std::int64_t den);
  static Rational of(std::int64_t num, std::int64_t den);

  /// Parses "3", "-3/2", "0.25" (decimals are converted exactly).
  static std::optional<Rational> parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }
  int sign() const { return (num_ > 0) - (num_ < 0); }

  long double to_ld() const { return static_cast<long double>(num_) / static_cast<long double>(den_); }
  double to_double() const { return static_cast<double>(to_ld()); }
  std::string str() const;

  /// Floor as integer (exact).
  std::int64_t floor() const;

  static std::optional<Rational> try_add(const Rational& a, const Rational& b);
  static std::optional<Rational> try_sub(const Rational& a, const Rational& b);
  static std::optional<Rational> try_mul(const Rational& a, const Rational& b);
  static std::optional<Rational> try_div(const Rational& a, const Rational& b);
  /// a^e for rational e = p/q when the result is rational (perfect q-th powers).
  static std::optional<Rational> try_pow(const Rational& a, const Rational& e);

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const;

  friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b);
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Integer k-th root if exact.
std::optional<std::int64_t> exact_root(std::int64_t value, std::int64_t k);

}  // namespace ergolab
