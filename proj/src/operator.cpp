#include "ergolab/operator.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <cmath>

#include "ergolab/errors.hpp"
#include "ergolab/evaluate.hpp"
#include "ergolab/trace.hpp"
#include "spec_text.hpp"

namespace ergolab {
namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

Mat matrix_power(const Mat& T, std::int64_t n) {
  Mat result = Mat::Identity(T.rows(), T.cols());
  Mat base = T;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return result;
}

Mat as_matrix(std::int64_t dim, const std::vector<double>& m) {
  Mat T(dim, dim);
  for (std::int64_t i = 0; i < dim; ++i)
    for (std::int64_t j = 0; j < dim; ++j) T(i, j) = m[static_cast<std::size_t>(i * dim + j)];
  return T;
}

Vec dense(const VectorModel& x, std::int64_t dim) {
  Vec v = Vec::Zero(dim);
  for (std::int64_t i = 0; i < x.width(); ++i) v(x.offset() + i) = x.coefficients()[static_cast<std::size_t>(i)];
  return v;
}

double parse_real(const std::string& s) {
  if (auto q = Rational::parse(s)) return q->to_double();
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) throw ParseError("bad real number '" + s + "'", 0);
  return v;
}

Rational parse_rational(const std::string& s, const char* what) {
  auto q = Rational::parse(s);
  if (!q) throw ParseError(std::string("expected a rational number in ") + what + ": '" + s + "'", 0);
  return *q;
}

DiagonalEntry make_entry(Rational modulus, const HardyExpr& phase) {
  if (!phase.is_constant()) throw ParseError("eigenvalue phase must be a constant", 0);
  if (modulus.sign() < 0) throw Error(ErrorCode::InvalidArgument, "eigenvalue modulus must be non-negative");
  if (modulus > Rational(1)) throw Error(ErrorCode::InvalidArgument, "eigenvalue modulus > 1: not power bounded");
  DiagonalEntry e;
  e.modulus = modulus;
  e.phase = phase;
  Quad v = eval_approx<Quad>(phase, static_cast<Quad>(0), std::nullopt, 113).value;
  e.phase_frac = v - floorq(v);
  return e;
}

}  // namespace

// ---- VectorModel ----

VectorModel VectorModel::from_coords(std::int64_t offset, std::vector<Rational> coeffs) {
  VectorModel x;
  x.offset_ = offset;
  for (const auto& c : coeffs) {
    x.coef_.push_back(c.to_double());
    x.text_.push_back(c.str());
    x.norm2_ += c.to_double() * c.to_double();
  }
  x.exact_ = std::move(coeffs);
  return x;
}

VectorModel VectorModel::unit(std::int64_t index) { return from_coords(index, {Rational(1)}); }

VectorModel VectorModel::parse(std::string_view spec) {
  if (spec.rfind("e:", 0) == 0) return unit(text::parse_i64(spec.substr(2), "unit vector"));
  if (spec.rfind("coords:", 0) != 0) throw ParseError("vector spec must start with coords: or e:", 0);
  std::string_view body = spec.substr(7);
  std::int64_t offset = 0;
  if (auto semi = body.find(';'); semi != std::string_view::npos) {
    auto [key, val] = text::key_value(body.substr(0, semi));
    if (key != "offset") throw ParseError("unknown vector option '" + key + "'", 7);
    offset = text::parse_i64(val, "offset");
    body = body.substr(semi + 1);
  }
  VectorModel x;
  x.offset_ = offset;
  std::vector<Rational> exact;
  bool all_rational = true;
  for (const auto& part : text::split(body, ',')) {
    double v = 0;
    if (auto q = Rational::parse(part)) {
      exact.push_back(*q);
      v = q->to_double();
    } else {
      HardyExpr e = HardyExpr::parse(part);
      if (!e.is_constant()) throw ParseError("vector coefficient must be a constant: '" + part + "'", 0);
      v = static_cast<double>(eval_approx<long double>(e, 0.0L, std::nullopt, 64).value);
      all_rational = false;
    }
    x.coef_.push_back(v);
    x.text_.push_back(part);
    x.norm2_ += v * v;
  }
  if (all_rational) x.exact_ = std::move(exact);
  return x;
}

double VectorModel::at(std::int64_t j) const {
  std::int64_t i = j - offset_;
  return i >= 0 && i < width() ? coef_[static_cast<std::size_t>(i)] : 0.0;
}

VectorModel VectorModel::normalized() const {
  require(norm2_ > 0, "cannot normalize the zero vector");
  VectorModel y = *this;
  const double s = 1.0 / std::sqrt(norm2_);
  y.exact_.reset();
  y.norm2_ = 0;
  for (std::size_t i = 0; i < y.coef_.size(); ++i) {
    y.coef_[i] *= s;
    y.norm2_ += y.coef_[i] * y.coef_[i];
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof buf, y.coef_[i]);
    y.text_[i].assign(buf, r.ptr);
  }
  return y;
}

std::string VectorModel::str() const {
  std::string s = "coords:offset=" + std::to_string(offset_) + ";";
  for (std::size_t i = 0; i < text_.size(); ++i) s += (i ? "," : "") + text_[i];
  return s;
}

// ---- OperatorModel ----

const char* model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::BilateralShift: return "bilateral-shift";
    case ModelKind::SimilarShift: return "similar-shift";
    case ModelKind::DiagonalUnitary: return "diagonal-unitary";
    case ModelKind::Diagonal: return "diagonal";
    case ModelKind::StrictContractionMatrix: return "strict-contraction-matrix";
  }
  return "?";
}

OperatorModel OperatorModel::shift() { return OperatorModel(); }

OperatorModel OperatorModel::similar_shift(std::vector<Rational> pattern) {
  require(!pattern.empty(), "simshift: empty weight pattern");
  for (const auto& d : pattern) require(d.sign() > 0, "simshift: weights must be positive");
  OperatorModel m;
  m.kind_ = ModelKind::SimilarShift;
  m.pattern_ = std::move(pattern);
  return m;
}

OperatorModel OperatorModel::diagonal(std::vector<DiagonalEntry> entries) {
  require(!entries.empty(), "diagonal model needs at least one eigenvalue");
  OperatorModel m;
  m.kind_ = std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.modulus == Rational(1); })
                ? ModelKind::DiagonalUnitary
                : ModelKind::Diagonal;
  m.dim_ = static_cast<std::int64_t>(entries.size());
  m.diag_ = std::move(entries);
  return m;
}

OperatorModel OperatorModel::matrix(std::int64_t dim, std::vector<double> row_major) {
  require(dim >= 1 && static_cast<std::int64_t>(row_major.size()) == dim * dim, "mat: entry count must be dim^2");
  Mat T = as_matrix(dim, row_major);
  Eigen::EigenSolver<Mat> es(T, false);
  const double rho = es.eigenvalues().cwiseAbs().maxCoeff();
  if (!(rho < 1 - 1e-12))
    throw Error(ErrorCode::InvalidArgument, "mat: spectral radius " + std::to_string(rho) + " is not < 1");
  OperatorModel m;
  m.kind_ = ModelKind::StrictContractionMatrix;
  m.dim_ = dim;
  m.mat_ = std::move(row_major);
  return m;
}

OperatorModel OperatorModel::parse(std::string_view spec) {
  if (spec == "shift") return shift();
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw ParseError("unknown operator model '" + std::string(spec) + "'", 0);
  const std::string kind(spec.substr(0, colon));
  std::string_view body = spec.substr(colon + 1);
  if (kind == "simshift") {
    if (body.rfind("pattern=", 0) == 0) body = body.substr(8);
    std::vector<Rational> pattern;
    for (const auto& p : text::split(body, ',')) pattern.push_back(parse_rational(p, "simshift"));
    return similar_shift(std::move(pattern));
  }
  if (kind == "diagu" || kind == "diag") {
    std::vector<DiagonalEntry> entries;
    for (const auto& p : text::split(body, ',')) {
      if (kind == "diagu") {
        entries.push_back(make_entry(Rational(1), HardyExpr::parse(p)));
        continue;
      }
      const auto at = p.find('@');
      Rational r = parse_rational(p.substr(0, at), "diag");
      HardyExpr phase = at == std::string::npos ? HardyExpr::constant(Rational(0)) : HardyExpr::parse(p.substr(at + 1));
      entries.push_back(make_entry(r, phase));
    }
    return diagonal(std::move(entries));
  }
  if (kind == "mat") {
    std::vector<double> m;
    for (const auto& p : text::split(body, ',')) m.push_back(parse_real(p));
    auto dim = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(m.size()))));
    if (dim * dim != static_cast<std::int64_t>(m.size())) throw ParseError("mat: entry count is not a square", 0);
    return matrix(dim, std::move(m));
  }
  throw ParseError("unknown operator model '" + kind + "'", 0);
}

std::string OperatorModel::str() const {
  std::string s;
  switch (kind_) {
    case ModelKind::BilateralShift:
      return "shift";
    case ModelKind::SimilarShift:
      s = "simshift:pattern=";
      for (std::size_t i = 0; i < pattern_.size(); ++i) s += (i ? "," : "") + pattern_[i].str();
      return s;
    case ModelKind::DiagonalUnitary:
      s = "diagu:";
      for (std::size_t i = 0; i < diag_.size(); ++i) s += (i ? "," : "") + diag_[i].phase.str();
      return s;
    case ModelKind::Diagonal:
      s = "diag:";
      for (std::size_t i = 0; i < diag_.size(); ++i) s += (i ? "," : "") + diag_[i].modulus.str() + "@" + diag_[i].phase.str();
      return s;
    case ModelKind::StrictContractionMatrix:
      s = "mat:";
      for (std::size_t i = 0; i < mat_.size(); ++i) {
        char buf[32];
        auto r = std::to_chars(buf, buf + sizeof buf, mat_[i]);
        s += (i ? "," : "") + std::string(buf, r.ptr);
      }
      return s;
  }
  return s;
}

void OperatorModel::check_vector(const VectorModel& x) const {
  if (dim_ == 0) return;
  require(x.offset() >= 0 && x.offset() + x.width() <= dim_,
          "vector coordinates outside the model dimension " + std::to_string(dim_));
}

double OperatorModel::d(std::int64_t j) const {
  return pattern_[static_cast<std::size_t>(floor_mod(j, static_cast<std::int64_t>(pattern_.size())))].to_double();
}

const Rational& OperatorModel::dq(std::int64_t j) const {
  return pattern_[static_cast<std::size_t>(floor_mod(j, static_cast<std::int64_t>(pattern_.size())))];
}

std::complex<double> entry_power(const DiagonalEntry& e, std::int64_t m) {
  if (m <= 0) return 1.0;
  Quad x = e.phase_frac * static_cast<Quad>(m);
  x -= floorq(x);
  const double r = e.modulus == Rational(1) ? 1.0 : std::pow(e.modulus.to_double(), static_cast<double>(m));
  return r * unit(static_cast<double>(x));
}

std::complex<double> OperatorModel::gram(const VectorModel& x, std::int64_t a, std::int64_t b) const {
  a = std::max<std::int64_t>(a, 0);
  b = std::max<std::int64_t>(b, 0);
  const auto& c = x.coefficients();
  const std::int64_t w = x.width();
  const std::int64_t diff = a - b;
  switch (kind_) {
    case ModelKind::BilateralShift: {
      double s = 0;
      for (std::int64_t i = std::max<std::int64_t>(0, -diff); i < w && i + diff < w; ++i)
        s += c[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(i + diff)];
      return s;
    }
    case ModelKind::SimilarShift: {
      double s = 0;
      for (std::int64_t i = std::max<std::int64_t>(0, -diff); i < w && i + diff < w; ++i) {
        const std::int64_t j = x.offset() + a + i;  // absolute coordinate of (T^a x)_j
        s += d(j) * d(j) * c[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(i + diff)] /
             (d(j - a) * d(j - b));
      }
      return s;
    }
    case ModelKind::DiagonalUnitary:
    case ModelKind::Diagonal: {
      check_vector(x);
      std::complex<double> s = 0;
      for (std::int64_t i = 0; i < w; ++i) {
        const auto& e = diag_[static_cast<std::size_t>(x.offset() + i)];
        const double ci = c[static_cast<std::size_t>(i)];
        std::complex<double> lam = diff >= 0 ? entry_power(e, diff) : std::conj(entry_power(e, -diff));
        if (e.modulus != Rational(1)) lam *= std::pow(e.modulus.to_double(), static_cast<double>(2 * std::min(a, b)));
        s += ci * ci * lam;
      }
      return s;
    }
    case ModelKind::StrictContractionMatrix: {
      check_vector(x);
      Mat T = as_matrix(dim_, mat_);
      Vec v = dense(x, dim_);
      return (matrix_power(T, a) * v).dot(matrix_power(T, b) * v);
    }
  }
  return 0;
}

std::optional<Rational> OperatorModel::gram_exact(const VectorModel& x, std::int64_t a, std::int64_t b) const {
  if (!is_shift_kind() || !x.exact()) return std::nullopt;
  a = std::max<std::int64_t>(a, 0);
  b = std::max<std::int64_t>(b, 0);
  const auto& c = *x.exact();
  const std::int64_t w = x.width();
  const std::int64_t diff = a - b;
  Rational s(0);
  for (std::int64_t i = std::max<std::int64_t>(0, -diff); i < w && i + diff < w; ++i) {
    auto term = Rational::try_mul(c[static_cast<std::size_t>(i)], c[static_cast<std::size_t>(i + diff)]);
    if (term && kind_ == ModelKind::SimilarShift) {
      const std::int64_t j = x.offset() + a + i;
      auto num = Rational::try_mul(dq(j), dq(j));
      auto den = Rational::try_mul(dq(j - a), dq(j - b));
      auto f = num && den ? Rational::try_div(*num, *den) : std::nullopt;
      term = f ? Rational::try_mul(*term, *f) : std::nullopt;
    }
    if (!term) return std::nullopt;
    auto next = Rational::try_add(s, *term);
    if (!next) return std::nullopt;
    s = *next;
  }
  return s;
}

std::complex<double> OperatorModel::pair(const VectorModel& x, std::int64_t a, const VectorModel& y) const {
  a = std::max<std::int64_t>(a, 0);
  const auto& c = x.coefficients();
  switch (kind_) {
    case ModelKind::BilateralShift:
    case ModelKind::SimilarShift: {
      double s = 0;
      const std::int64_t lo = std::max(x.offset() + a, y.offset());
      const std::int64_t hi = std::min(x.offset() + a + x.width(), y.offset() + y.width());
      for (std::int64_t j = lo; j < hi; ++j) {
        double v = c[static_cast<std::size_t>(j - a - x.offset())];
        if (kind_ == ModelKind::SimilarShift) v *= d(j) / d(j - a);
        s += v * y.at(j);
      }
      return s;
    }
    case ModelKind::DiagonalUnitary:
    case ModelKind::Diagonal: {
      check_vector(x);
      check_vector(y);
      std::complex<double> s = 0;
      for (std::int64_t i = 0; i < x.width(); ++i) {
        const std::int64_t j = x.offset() + i;
        s += c[static_cast<std::size_t>(i)] * entry_power(diag_[static_cast<std::size_t>(j)], a) * y.at(j);
      }
      return s;
    }
    case ModelKind::StrictContractionMatrix: {
      check_vector(x);
      check_vector(y);
      return (matrix_power(as_matrix(dim_, mat_), a) * dense(x, dim_)).dot(dense(y, dim_));
    }
  }
  return 0;
}

Rational OperatorModel::shift_power_norm(std::int64_t n) const {
  if (kind_ != ModelKind::SimilarShift) return Rational(1);
  Rational best(0);
  const auto p = static_cast<std::int64_t>(pattern_.size());
  for (std::int64_t j = 0; j < p; ++j) best = std::max(best, dq(j) / dq(j - n));
  return best;
}

PowerBound OperatorModel::power_bound(std::int64_t n_max) const {
  require(n_max >= 1, "power_bound: n_max must be >= 1");
  PowerBound pb;
  switch (kind_) {
    case ModelKind::BilateralShift:
    case ModelKind::DiagonalUnitary:
      pb.exact = Rational(1);
      return pb;
    case ModelKind::Diagonal: {
      pb.exact = Rational(1);
      Rational top(0);
      for (const auto& e : diag_) top = std::max(top, e.modulus);
      pb.norm_T = top.to_double();
      return pb;
    }
    case ModelKind::SimilarShift: {
      const auto [lo, hi] = std::minmax_element(pattern_.begin(), pattern_.end());
      const Rational M = *hi / *lo;
      pb.exact = M;
      pb.M = M.to_double();
      pb.norm_T = shift_power_norm(1).to_double();
      const auto p = static_cast<std::int64_t>(pattern_.size());
      Rational best(0);
      for (std::int64_t n = 0; n < p; ++n) {
        Rational v = shift_power_norm(n);
        if (v == M) {
          pb.attained = n <= n_max;
          if (pb.attained) {
            pb.argmax = n;
            return pb;
          }
          break;
        }
      }
      for (std::int64_t n = 0; n <= std::min(n_max, p - 1); ++n) {
        Rational v = shift_power_norm(n);
        if (best < v) {
          best = v;
          pb.argmax = n;
        }
      }
      return pb;
    }
    case ModelKind::StrictContractionMatrix: {
      const Mat T = as_matrix(dim_, mat_);
      auto opnorm = [](const Mat& A) { return Eigen::JacobiSVD<Mat>(A).singularValues()(0); };
      pb.norm_T = opnorm(T);
      // If ||T^n0|| < 1 then every ||T^n|| <= max_{r < n0} ||T^r||.
      const std::int64_t limit = std::max<std::int64_t>(n_max, 100000);
      Mat P = Mat::Identity(dim_, dim_);
      double best = 1;
      pb.certified = false;
      for (std::int64_t n = 1; n <= limit; ++n) {
        P = P * T;
        const double s = opnorm(P);
        const double slack = 1e-13 * static_cast<double>(n) * static_cast<double>(dim_);
        if (s > best) {
          best = s;
          pb.argmax = n;
        }
        if (s + slack < 1) {
          pb.certified = true;
          break;
        }
      }
      pb.M = best * (1 + 1e-12);
      pb.attained = pb.argmax <= n_max;
      return pb;
    }
  }
  return pb;
}

std::vector<std::complex<double>> OperatorModel::peripheral_point_spectrum() const {
  std::vector<std::complex<double>> out;
  for (const auto& e : diag_)
    if (e.modulus == Rational(1)) out.push_back(unit(static_cast<double>(e.phase_frac)));
  return out;
}

JgdlSplit jgdl_split(const OperatorModel& model) {
  JgdlSplit s;
  if (model.is_diagonal_kind()) {
    for (std::size_t i = 0; i < model.entries().size(); ++i)
      (model.entries()[i].modulus == Rational(1) ? s.x1 : s.x2).push_back(static_cast<std::int64_t>(i + 1));
    return s;
  }
  if (model.kind() == ModelKind::StrictContractionMatrix) {
    const std::int64_t n = model.dimension();
    for (std::int64_t i = 0; i < n; ++i)
      for (std::int64_t j = 0; j < n; ++j)
        if (i != j && model.matrix_entries()[static_cast<std::size_t>(i * n + j)] != 0)
          throw Unsupported("jgdl_split: matrix model is not diagonal");
    for (std::int64_t i = 1; i <= n; ++i) s.x2.push_back(i);
    return s;
  }
  throw Unsupported("jgdl_split: shift models have no eigenvectors");
}

}  // namespace ergolab
