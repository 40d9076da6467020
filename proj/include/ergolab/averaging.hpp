#pragma once

// Cesaro-type averages of T^{a_n} x along a subsequence, optionally weighted
// by e(g(n)) and restricted to an index set, with norms computed from inner
// products instead of materialized vectors.

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ergolab/index_set.hpp"
#include "ergolab/operator.hpp"
#include "ergolab/sequence.hpp"
#include "ergolab/trace.hpp"
#include "ergolab/weights.hpp"

namespace ergolab {

struct ExperimentConfig {
  OperatorModel model;
  VectorModel x = VectorModel::unit(0);
  SubsequenceSpec seq{HardyExpr::var(), Perturbation(), {}};
  IndexSet A = IndexSet::natural();
  WeightSpec weight;
  std::int64_t N = 100000;
  std::vector<std::int64_t> checkpoints;  // empty: geometric 2^(1/4) from 100
  bool dedup = false;                     // keep only the first occurrence of each a_n
  std::vector<VectorModel> witnesses;     // dual vectors for weak averages
  Tolerances tol{};
  int jobs = 1;

  /// Checks N >= 100, the schedule and the vector; fills the default schedule.
  void validate();
};

struct TracePoint {
  std::int64_t N = 0;
  std::int64_t N_eff = 0;          // card(A n [1, N])
  std::complex<double> value;      // <A_N x, x> / ||x||^2
  double norm2 = 0;                // ||A_N x||^2
  double osc = 0;                  // spread of norm2 over checkpoints in [N/10, N]
};

struct AverageTrace {
  std::vector<TracePoint> points;
  TraceSummary summary;            // verdict on norm2
  Tolerances tol;
  bool exact = false;              // norm2 is the correctly rounded exact rational
  bool dedup = false;
  std::int64_t flagged = 0;        // exponents replaced by the identity convention
  std::int64_t horizon = 0;        // number of sequence terms actually used
  std::string method;              // "gram-buckets", "diagonal", "matrix", "materialized"
};

/// ||N_eff^-1 sum_{n in A, n <= N} c_n T^{a_n} x||^2 at every checkpoint.
AverageTrace vector_average(const ExperimentConfig& cfg);

/// Same, reusing a sequence generated from cfg.seq with at least N terms.
AverageTrace vector_average(const ExperimentConfig& cfg, const GeneratedSequence& seq);

/// Same quantity by materializing the average vector (shift kinds).
/// Throws GuardExceeded when the coordinate range times the checkpoint count
/// exceeds 2e9.
AverageTrace vector_average_materialized(const ExperimentConfig& cfg);

/// ||N^-1 sum_{j <= N} T^{a_{j+k} - a_j} x||^2. A and the weights are ignored;
/// negative exponents follow the identity convention and are counted in
/// `flagged`.
AverageTrace difference_average(const ExperimentConfig& cfg, int k);
/// Same, reusing a sequence with at least N + k terms.
AverageTrace difference_average(const ExperimentConfig& cfg, int k, const GeneratedSequence& seq);

struct WeakTrace {
  std::string witness;
  std::vector<std::int64_t> checkpoints;
  std::vector<double> values;
  TraceSummary summary;
};

struct WeakAverage {
  std::vector<WeakTrace> per_witness;
  /// Max over the finite witness family: a lower bound for the sup over the
  /// dual unit ball.
  WeakTrace sup_lower_bound;
};

/// N_eff^-1 sum_{n in A, n <= N} |<T^{a_n} x, x*>| for every normalized witness.
WeakAverage weak_average(const ExperimentConfig& cfg);

/// Verdict on the squared-norm trace.
TraceSummary verdict(const AverageTrace& trace, const Tolerances& tol);

/// Writes `N,N_eff,value_re,value_im,norm2,osc`.
void write_trace_csv(std::ostream& out, const AverageTrace& trace);

}  // namespace ergolab
