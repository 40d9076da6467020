#pragma once

// Power-bounded operator models acting on finitely supported vectors.
// Inner products are <u, v> = sum_j u_j conj(v_j).

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ergolab/expr.hpp"
#include "ergolab/rational.hpp"
#include "ergolab/real.hpp"

namespace ergolab {

/// Finitely supported real vector: coefficient i sits at coordinate offset + i.
/// Spec strings: `coords:offset=0;1,0,1`, `coords:1,1`, `e:3` (unit vector).
class VectorModel {
 public:
  VectorModel() = default;
  static VectorModel parse(std::string_view spec);
  static VectorModel unit(std::int64_t index);
  static VectorModel from_coords(std::int64_t offset, std::vector<Rational> coeffs);

  std::int64_t offset() const { return offset_; }
  std::int64_t width() const { return static_cast<std::int64_t>(coef_.size()); }
  const std::vector<double>& coefficients() const { return coef_; }
  /// Present when every coefficient is rational.
  const std::optional<std::vector<Rational>>& exact() const { return exact_; }
  double norm2() const { return norm2_; }
  /// Coefficient at absolute coordinate j (0 outside the support).
  double at(std::int64_t j) const;
  /// Copy scaled to unit norm.
  VectorModel normalized() const;
  std::string str() const;

 private:
  std::int64_t offset_ = 0;
  std::vector<double> coef_;
  std::optional<std::vector<Rational>> exact_;
  std::vector<std::string> text_;
  double norm2_ = 0;
  bool scaled_ = false;
};

enum class ModelKind { BilateralShift, SimilarShift, DiagonalUnitary, Diagonal, StrictContractionMatrix };
const char* model_kind_name(ModelKind k);

struct PowerBound {
  double M = 1;                 // certified sup_n ||T^n||
  std::optional<Rational> exact;
  std::int64_t argmax = 0;      // least n <= n_max with ||T^n|| = M (or the best n <= n_max)
  bool attained = true;         // the sup is reached at some n <= n_max
  bool certified = true;
  double norm_T = 1;            // ||T||
};

/// Diagonal entry r e(theta).
struct DiagonalEntry {
  Rational modulus{1};
  HardyExpr phase;
  Quad phase_frac = 0;  // theta mod 1
};

/// Spec strings: `shift`; `simshift:pattern=1,2` (T = D S D^-1 with
/// D = diag(d_{i mod p})); `diagu:1/3,sqrt2` (eigenvalues e(theta_j));
/// `diag:0.5,1@sqrt2` (entries r or r@theta for r e(theta), 0 <= r <= 1);
/// `mat:a11,a12,a21,a22` (row-major real square matrix, spectral radius < 1).
class OperatorModel {
 public:
  OperatorModel() = default;
  static OperatorModel parse(std::string_view spec);
  static OperatorModel shift();
  static OperatorModel similar_shift(std::vector<Rational> pattern);
  static OperatorModel diagonal(std::vector<DiagonalEntry> entries);
  static OperatorModel matrix(std::int64_t dim, std::vector<double> row_major);

  ModelKind kind() const { return kind_; }
  bool is_shift_kind() const { return kind_ == ModelKind::BilateralShift || kind_ == ModelKind::SimilarShift; }
  bool is_diagonal_kind() const { return kind_ == ModelKind::DiagonalUnitary || kind_ == ModelKind::Diagonal; }
  /// 0 for operators on l2(Z).
  std::int64_t dimension() const { return dim_; }
  const std::vector<Rational>& pattern() const { return pattern_; }
  const std::vector<DiagonalEntry>& entries() const { return diag_; }
  const std::vector<double>& matrix_entries() const { return mat_; }
  std::string str() const;

  /// Throws InvalidArgument when x does not live in the model's space.
  void check_vector(const VectorModel& x) const;

  /// <T^a x, T^b x>; negative exponents follow the identity convention.
  std::complex<double> gram(const VectorModel& x, std::int64_t a, std::int64_t b) const;
  /// Exact value for shift kinds with rational data; nullopt otherwise or on overflow.
  std::optional<Rational> gram_exact(const VectorModel& x, std::int64_t a, std::int64_t b) const;
  /// <T^a x, y>.
  std::complex<double> pair(const VectorModel& x, std::int64_t a, const VectorModel& y) const;
  /// sup_j d_j / d_{j-n} for the similar shift (1 for the plain shift).
  Rational shift_power_norm(std::int64_t n) const;

  PowerBound power_bound(std::int64_t n_max) const;
  /// Eigenvalues on the unit circle (empty for shift kinds and matrices).
  std::vector<std::complex<double>> peripheral_point_spectrum() const;

 private:
  ModelKind kind_ = ModelKind::BilateralShift;
  std::int64_t dim_ = 0;
  std::vector<Rational> pattern_;
  std::vector<DiagonalEntry> diag_;
  std::vector<double> mat_;
  double d(std::int64_t j) const;
  const Rational& dq(std::int64_t j) const;
};

struct JgdlSplit {
  std::vector<std::int64_t> x1;  // 1-based indices of unimodular eigenvectors
  std::vector<std::int64_t> x2;  // 1-based indices with |lambda| < 1
};

/// Splits the coordinates of a diagonal (or diagonal matrix) model.
JgdlSplit jgdl_split(const OperatorModel& model);

/// e(m theta) as r^m e(frac(theta m)) for a diagonal entry.
std::complex<double> entry_power(const DiagonalEntry& e, std::int64_t m);

}  // namespace ergolab
