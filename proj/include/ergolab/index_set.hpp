#pragma once

// Subsets A of N = {1, 2, ...}: generators, density traces, word statistics
// and the derived sets A_{k,m}.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ergolab/normal_form.hpp"
#include "ergolab/real.hpp"

namespace ergolab {

class IndexSet {
 public:
  enum class Kind { Natural, Progression, Rotation, Bernoulli, Champernowne, Blocks, Mask };

  /// Spec strings: `nat`, `ap:offset,step`, `rot:alpha=sqrt2-1,lo=0,hi=1/3,x0=0`,
  /// `bern:p=0.3,seed=7`, `champ` (binary Champernowne word), `blocks`
  /// (blocks [2^j, 2^(j+1)) with j even), `mask:0110` or `mask:0110,repeat`.
  static IndexSet parse(std::string_view spec);

  static IndexSet natural();
  static IndexSet progression(std::int64_t offset, std::int64_t step);
  static IndexSet rotation(const HardyExpr& alpha, const HardyExpr& lo, const HardyExpr& hi, const HardyExpr& x0);
  static IndexSet bernoulli(double p, std::uint64_t seed);
  static IndexSet champernowne();
  static IndexSet blocks();
  /// bits[i] is membership of i+1; a finite set unless `repeat`.
  static IndexSet mask(std::vector<std::uint8_t> bits, bool repeat = false);
  /// Reads an `RLE1:` file written by write_rle1.
  static IndexSet read_rle1(std::istream& in);

  Kind kind() const { return kind_; }
  bool contains(std::int64_t n) const;
  /// ind[i] = 1 iff i+1 in A, for i < N.
  std::vector<std::uint8_t> indicator(std::int64_t N) const;
  /// Elements of A in [1, N], ascending.
  std::vector<std::int64_t> elements(std::int64_t N) const;
  /// First `count` elements g_A(1), ..., g_A(count), scanning at most up to `limit`.
  std::vector<std::int64_t> first(std::int64_t count, std::int64_t limit) const;
  /// Exact density when it is known in closed form (nat, ap, rot, bern,
  /// periodic masks); negative otherwise.
  double nominal_density() const;
  std::string str() const;

 private:
  struct Rot {
    HardyExpr alpha, lo, hi, x0;
    Coef c_alpha, c_lo, c_hi, c_x0;
    bool exact = false;
    bool all_rational = false;
    Rational q_alpha, q_lo, q_hi, q_x0;
    Quad f_alpha = 0, f_lo = 0, f_hi = 0, f_x0 = 0;
    Quad f_err = 0;  // bound on the error of each stored value
  };

  bool rot_contains(std::int64_t n) const;

  Kind kind_ = Kind::Natural;
  std::int64_t offset_ = 1;
  std::int64_t step_ = 1;
  double p_ = 0;
  std::uint64_t seed_ = 0;
  std::shared_ptr<const Rot> rot_;
  std::shared_ptr<const std::vector<std::uint8_t>> bits_;
  bool repeat_ = false;
  std::string spec_;
};

/// Geometric checkpoints from `start` to N (inclusive), `per_doubling` per
/// factor of two, rounded to distinct integers.
std::vector<std::int64_t> geometric_checkpoints(std::int64_t start, std::int64_t N, int per_doubling = 4);

struct DensityTrace {
  std::vector<std::int64_t> checkpoints;
  std::vector<std::int64_t> counts;
  std::vector<double> density;
  double value = 0;  // density at N
  double band = 0;   // max - min over checkpoints in [N/10, N]
  bool converged = false;
  double tolerance = 0.01;
};

/// Trace of card(A n [1,n]) / n from an indicator prefix.
DensityTrace density_trace(const std::vector<std::uint8_t>& ind, const std::vector<std::int64_t>& checkpoints,
                           double tolerance = 0.01);
DensityTrace density(const IndexSet& A, std::int64_t N, const std::vector<std::int64_t>& checkpoints,
                     double tolerance = 0.01);

/// A_{k,m} = { n in A : n+m in A, card(A n [n, n+m]) = k+1 } restricted to [1, N].
IndexSet extract_Akm(const IndexSet& A, std::int64_t k, std::int64_t m, std::int64_t N);

enum class WordVerdict { Converged, Oscillating, Rare };
const char* word_verdict_name(WordVerdict v);

enum class Regularity { Regular, WeaklyRegular, Irregular };
const char* regularity_name(Regularity r);

struct WordEntry {
  std::string word;  // "0110": membership of n, n+1, ...
  std::vector<std::int64_t> counts;  // at checkpoints
  double density = 0;
  double band = 0;
  WordVerdict verdict = WordVerdict::Converged;
};

struct AkmEntry {
  std::int64_t k = 0;
  std::int64_t m = 0;
  double density = 0;
  double band = 0;
  bool converged = false;
};

struct WordStats {
  int K = 0;
  std::int64_t N = 0;
  double tolerance = 0.01;
  std::int64_t rare_count = 30;
  std::vector<std::int64_t> checkpoints;
  std::vector<WordEntry> words;  // lengths 1..K+1, each block in lexicographic order
  std::vector<AkmEntry> akm;     // 1 <= k <= m <= K
  DensityTrace set_density;
  std::int64_t converged = 0, oscillating = 0, rare = 0;
  Regularity verdict = Regularity::Irregular;
};

/// Word statistics for all 0-1 words of length <= K+1 with counts over the
/// start positions n <= N. Words occurring fewer than `rare_count` times
/// (but at least once) are reported as rare.
WordStats regularity_report(const IndexSet& A, int K, std::int64_t N, double tolerance = 0.01,
                            std::int64_t rare_count = 30);

/// Sorted newline-delimited elements of A n [1, N].
void write_elements(std::ostream& out, const IndexSet& A, std::int64_t N);
/// `RLE1:N=<N>,first=<bit>` header, then one run length per line.
void write_rle1(std::ostream& out, const IndexSet& A, std::int64_t N);

}  // namespace ergolab
