#include "ergolab/trace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ergolab/errors.hpp"

namespace ergolab {

std::complex<double> unit(double phase) {
  double x = phase - std::round(phase);
  double a = 2.0 * std::numbers::pi * x;
  return {std::cos(a), std::sin(a)};
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::ConvergesToZero: return "converges-to-0";
    case Verdict::ConvergesNonzero: return "converges-nonzero";
    case Verdict::Diverges: return "diverges";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

TraceSummary summarize(const std::vector<std::int64_t>& checkpoints, const std::vector<std::complex<double>>& values,
                       const Tolerances& tol) {
  require(checkpoints.size() == values.size(), "trace: checkpoint and value counts differ");
  require(checkpoints.size() >= 10, "trace: need at least 10 checkpoints for a verdict");
  TraceSummary s;
  const std::int64_t N = checkpoints.back();
  s.final_abs = std::abs(values.back());
  std::vector<std::complex<double>> tail;
  for (std::size_t i = 0; i < checkpoints.size(); ++i)
    if (10 * checkpoints[i] >= N) tail.push_back(values[i]);
  for (std::size_t i = 0; i < tail.size(); ++i) {
    s.tail_max_abs = std::max(s.tail_max_abs, std::abs(tail[i]));
    for (std::size_t j = i + 1; j < tail.size(); ++j) s.oscillation = std::max(s.oscillation, std::abs(tail[i] - tail[j]));
  }
  if (s.final_abs < tol.converge && s.tail_max_abs < 2 * tol.converge)
    s.verdict = Verdict::ConvergesToZero;
  else if (s.oscillation > tol.diverge)
    s.verdict = Verdict::Diverges;
  else if (s.oscillation < tol.converge)
    s.verdict = Verdict::ConvergesNonzero;
  else
    s.verdict = Verdict::Inconclusive;
  return s;
}

}  // namespace ergolab
