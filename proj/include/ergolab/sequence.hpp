#pragma once

// Integer sequences a_n = [f(n)] + h_n and the level-crossing table
// b_k = min{ n : f non-decreasing on [n, inf) and f(n) >= k }.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ergolab/evaluate.hpp"
#include "ergolab/expr.hpp"

namespace ergolab {

/// Bounded integer perturbation h_n, n >= 1. Spec strings: `zero`,
/// `const:3`, `period:-1,1` (h_n = pattern[(n-1) mod p]), `rand:r=2,seed=42`.
class Perturbation {
 public:
  enum class Kind { Zero, Constant, Periodic, Random };

  Perturbation() = default;
  static Perturbation parse(std::string_view spec);

  Kind kind() const { return kind_; }
  std::int64_t at(std::int64_t n) const;
  /// sup |h_n|.
  std::int64_t bound() const { return bound_; }
  std::string str() const;

  friend bool operator==(const Perturbation& a, const Perturbation& b) = default;

 private:
  Kind kind_ = Kind::Zero;
  std::vector<std::int64_t> pattern_;
  std::int64_t bound_ = 0;
  std::uint64_t seed_ = 0;
};

/// splitmix64 finaliser; the seeded generators hash (seed, index) so that any
/// element can be computed independently.
std::uint64_t mix64(std::uint64_t x);
/// Uniform double in [0, 1) from (seed, index).
double hash_uniform(std::uint64_t seed, std::uint64_t index);

struct SubsequenceSpec {
  HardyExpr f;
  Perturbation h;
  PrecisionPolicy precision{};
};

enum SequenceFlag : std::uint8_t {
  kFlagUndefined = 1,  // f(n) not defined; exponent replaced by 0
  kFlagNegative = 2,   // [f(n)] + h_n < 0; exponent replaced by 0
};

struct GeneratedSequence {
  std::vector<std::int64_t> a;      // a[n-1] = a_n
  std::vector<std::uint8_t> flags;  // SequenceFlag bits per index
  std::int64_t flagged = 0;
  std::int64_t last_flagged = 0;  // largest flagged n, 0 if none
  std::int64_t perturbation_bound = 0;
};

/// a_n = floor(f(n)) + h_n with certified floors. Indices where f is
/// undefined or the result is negative get exponent 0 (identity) and a flag.
/// Work is split across `jobs` threads; the output does not depend on it.
GeneratedSequence generate_a(const SubsequenceSpec& spec, std::int64_t N, int jobs = 1);

/// Keeps the first occurrence of each value, preserving order.
std::vector<std::int64_t> dedup_first(const std::vector<std::int64_t>& a);

struct BkTable {
  HardyExpr f;
  std::int64_t start = 1;        // least n with f defined and non-decreasing on [n, inf)
  std::vector<std::int64_t> b;   // b[k-1] = b_k
  std::vector<std::int64_t> gaps() const;  // d_j = b_{j+1} - b_j
};

/// Throws DomainError if f is not eventually non-decreasing or stays below K.
BkTable build_bk(const HardyExpr& f, std::int64_t K, const PrecisionPolicy& precision = {});

struct Witnessed {
  double value = 0;
  std::int64_t at = 0;
};

struct RatioDiagnostics {
  std::int64_t N = 0;
  Witnessed sup_a2n_over_an;       // over n in [1, N/2] with a_n > 0
  Witnessed tail_sup_a2n_over_an;  // over n in [N/4, N/2]
  Witnessed prev_sup_a2n_over_an;  // over n in [N/8, N/4]
  bool ratio_growing = false;      // tail sup exceeds the previous block by > 5%
  Witnessed tail_max_step;         // max |a_{n+1}/a_n - 1| over n in [N/2, N-1]
  std::int64_t non_increasing = 0; // n with a_{n+1} <= a_n
  std::int64_t decreasing = 0;     // n with a_{n+1} < a_n
  std::int64_t last_violation = 0;
};

RatioDiagnostics ratio_diagnostics(const std::vector<std::int64_t>& a);

struct BkDiagnostics {
  std::int64_t K = 0;
  Witnessed sup_k_gap_over_b;        // sup k d_k / b_k, k in [1, K-1]
  Witnessed tail_sup_k_gap_over_b;   // same over k in [K/2, K-1]
  bool tail_running_max_non_increasing = false;  // max over the second half of [K/2, K-1] <= first half
  double running_max_growth = 0;     // per doubling over k in [running_max_from, K-1]
  std::int64_t running_max_from = 0; // min(100, K/4)
  Witnessed tail_b_ratio;            // max b_{k+1}/b_k over k in [K/2, K-1]
  Witnessed tail_b_ratio_excess;     // max k (b_{k+1}/b_k - 1) over the same range
  Witnessed sup_gap_ratio;           // sup_{j<=k} d_j / (d_k + 1); `at` is k
  std::int64_t sup_gap_ratio_j = 0;
};

BkDiagnostics bk_diagnostics(const BkTable& table);

/// Newline-delimited decimal integers.
void write_sequence_text(std::ostream& out, const std::vector<std::int64_t>& a);
/// 64-bit little-endian integers.
void write_sequence_binary(std::ostream& out, const std::vector<std::int64_t>& a);

}  // namespace ergolab
