#pragma once

// Compensated accumulation and finite-horizon convergence verdicts for
// traces sampled at checkpoints.

#include <complex>
#include <cstdint>
#include <vector>

namespace ergolab {

/// Neumaier summation.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0;
  double comp_ = 0;
};

class CompensatedComplexSum {
 public:
  void add(std::complex<double> z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

/// e(x) = exp(2 pi i x) for a phase already reduced to [0, 1).
std::complex<double> unit(double phase);

enum class Verdict { ConvergesToZero, ConvergesNonzero, Diverges, Inconclusive };
const char* verdict_name(Verdict v);

struct Tolerances {
  double converge = 0.02;
  double diverge = 0.1;
};

struct TraceSummary {
  double final_abs = 0;
  double tail_max_abs = 0;  // over checkpoints in [N/10, N]
  double oscillation = 0;   // diameter of the values over checkpoints in [N/10, N]
  Verdict verdict = Verdict::Inconclusive;
};

/// Verdict on a trace: converges-to-0 if |final| < tol and the last-decade
/// maximum is below 2 tol; diverges if the last-decade oscillation exceeds
/// the divergence tolerance; converges-nonzero if it is below tol;
/// inconclusive otherwise. Requires at least 10 checkpoints.
TraceSummary summarize(const std::vector<std::int64_t>& checkpoints, const std::vector<std::complex<double>>& values,
                       const Tolerances& tol);

/// Scalar Cesaro trace N^-1 sum_{n <= N} z_n at the checkpoints.
struct ComplexTrace {
  std::vector<std::int64_t> checkpoints;
  std::vector<std::complex<double>> values;
  TraceSummary summary;
};

}  // namespace ergolab
