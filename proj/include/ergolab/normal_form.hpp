#pragma once

// Exact representation of finite sums  sum c * t^a (ln t)^b (ln ln t)^c  with
// rational exponents. Coefficients live in Q[sqrt2, sqrt3, sqrt5, pi^+-1,
// e^+-1]; anything else degrades to an approximate coefficient whose
// rationality is unknown.

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ergolab/expr.hpp"
#include "ergolab/rational.hpp"
#include "ergolab/real.hpp"

namespace ergolab {

enum class Rationality { Rational, Irrational, Unknown };

const char* rationality_name(Rationality r);

class Coef {
 public:
  /// Exponents of sqrt2, sqrt3, sqrt5 (each 0 or 1), pi and e (any integer).
  using Monomial = std::array<int, 5>;

  Coef() = default;
  static Coef rational(const Rational& q, bool decimal = false);
  static Coef named(NamedConst c);
  static Coef approximate(long double v);

  bool exact() const { return !approx_; }
  bool is_zero() const;
  int sign() const;
  long double value() const;
  MpReal mp_value(unsigned bits) const;
  std::optional<Rational> as_rational() const;
  Rationality rationality() const;
  const std::map<Monomial, Rational>& terms() const { return terms_; }

  Coef operator-() const;
  friend Coef operator+(const Coef& a, const Coef& b);
  friend Coef operator-(const Coef& a, const Coef& b);
  friend Coef operator*(const Coef& a, const Coef& b);
  Coef inverse() const;
  Coef pow(const Rational& r) const;
  /// Natural logarithm (positive coefficients only).
  Coef log() const;

  friend bool operator==(const Coef& a, const Coef& b);

  HardyExpr to_expr() const;
  std::string str() const;

 private:
  std::map<Monomial, Rational> terms_;
  bool decimal_ = false;
  std::optional<long double> approx_;
};

/// Asymptotic scale t^alpha (ln t)^beta (ln ln t)^gamma; ordered by growth.
struct Scale {
  Rational alpha;
  Rational beta;
  Rational gamma;

  friend bool operator==(const Scale& a, const Scale& b) = default;
  friend std::strong_ordering operator<=>(const Scale& a, const Scale& b);
  std::string str() const;
};

inline const Scale kConstantScale{};

class NormalForm {
 public:
  NormalForm() = default;
  static NormalForm constant(const Coef& c);
  static NormalForm term(const Coef& c, const Scale& s);
  /// nullopt if the expression leaves the representable class.
  static std::optional<NormalForm> from_expr(const HardyExpr& e);

  bool is_zero() const { return terms_.empty(); }
  const std::map<Scale, Coef>& terms() const { return terms_; }
  /// Term with the largest scale. Requires !is_zero().
  std::pair<Scale, Coef> leading() const;
  /// Scale of the leading term; for zero returns nullopt.
  std::optional<Scale> order() const;

  NormalForm derivative() const;
  NormalForm derivative(int k) const;
  /// Drops the terms tending to 0.
  NormalForm without_vanishing() const;
  /// Sum of the terms with non-negative integer alpha and beta = gamma = 0.
  NormalForm polynomial_part() const;

  NormalForm operator-() const;
  friend NormalForm operator+(const NormalForm& a, const NormalForm& b);
  friend NormalForm operator-(const NormalForm& a, const NormalForm& b);
  friend NormalForm operator*(const NormalForm& a, const NormalForm& b);
  NormalForm scaled(const Coef& c) const;
  std::optional<NormalForm> divided(const NormalForm& d) const;
  std::optional<NormalForm> pow(const Rational& r) const;

  /// sum_j m_j f(t + j) up to o(1), via Taylor expansion to the first
  /// derivative order that tends to 0. nullopt if no such order <= 24.
  std::optional<NormalForm> shift_combination(const std::vector<long long>& m) const;

  HardyExpr to_expr() const;
  std::string str() const;

  friend bool operator==(const NormalForm& a, const NormalForm& b) = default;

 private:
  void add_term(const Scale& s, const Coef& c);
  std::map<Scale, Coef> terms_;
};

}  // namespace ergolab
