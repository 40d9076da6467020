#include <cmath>
#include <complex>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "ergolab/errors.hpp"
#include "ergolab/operator.hpp"

using namespace ergolab;
using cd = std::complex<double>;

namespace {

// T^a x for T = D S D^-1 with D = diag(pattern[j mod p]), as a coordinate map.
std::map<std::int64_t, double> simshift_apply(const std::vector<double>& d, const VectorModel& x, std::int64_t a) {
  auto dd = [&](std::int64_t j) {
    const std::int64_t p = static_cast<std::int64_t>(d.size());
    return d[static_cast<std::size_t>(((j % p) + p) % p)];
  };
  std::map<std::int64_t, double> out;
  for (std::int64_t i = 0; i < x.width(); ++i) {
    const std::int64_t j = x.offset() + i;
    out[j + a] += x.coefficients()[i] * dd(j + a) / dd(j);
  }
  return out;
}

double dot(const std::map<std::int64_t, double>& u, const std::map<std::int64_t, double>& v) {
  double s = 0;
  for (const auto& [j, c] : u)
    if (auto it = v.find(j); it != v.end()) s += c * it->second;
  return s;
}

}  // namespace

TEST_CASE("shift gram equals the autocorrelation of the coefficients") {
  const VectorModel x = VectorModel::parse("coords:offset=-2;1,-1/2,2,1/3,-1");
  const OperatorModel S = OperatorModel::shift();
  for (std::int64_t a = 0; a <= 7; ++a)
    for (std::int64_t b = 0; b <= 7; ++b) {
      const auto ta = simshift_apply({1.0}, x, a), tb = simshift_apply({1.0}, x, b);
      CHECK(S.gram(x, a, b).real() == doctest::Approx(dot(ta, tb)).epsilon(1e-15));
      CHECK(S.gram(x, a, b).imag() == 0);
    }
  CHECK(S.gram_exact(x, 3, 2) == Rational::of(-1, 2) * 1 + Rational(2) * Rational::of(-1, 2) +
                                     Rational::of(1, 3) * 2 + Rational(-1) * Rational::of(1, 3));
}

TEST_CASE("similar shift gram and power bound against explicit action") {
  const OperatorModel T = OperatorModel::parse("simshift:1,2");
  const VectorModel x = VectorModel::parse("coords:offset=0;1,1,-1");
  for (std::int64_t a = 0; a <= 5; ++a)
    for (std::int64_t b = 0; b <= 5; ++b)
      CHECK(T.gram(x, a, b).real() ==
            doctest::Approx(dot(simshift_apply({1, 2}, x, a), simshift_apply({1, 2}, x, b))).epsilon(1e-14));
  // ||T^n|| = max_j d_{j+n} / d_j: 2 for odd n, 1 for even n.
  for (std::int64_t n = 1; n <= 6; ++n) CHECK(T.shift_power_norm(n) == Rational(n % 2 ? 2 : 1));
  const PowerBound pb = T.power_bound(100);
  CHECK(pb.M == 2);
  CHECK(pb.argmax == 1);
  CHECK(pb.certified);
}

TEST_CASE("unitary diagonal: gram is sum |x_j|^2 lambda_j^(a-b)") {
  const OperatorModel T = OperatorModel::parse("diagu:1/4,sqrt2");
  const VectorModel x = VectorModel::parse("coords:offset=0;1,2");
  const double PI = std::acos(-1.0);
  for (std::int64_t a = 0; a <= 6; ++a)
    for (std::int64_t b = 0; b <= 6; ++b) {
      const cd l1 = std::polar(1.0, 2 * PI * 0.25 * (a - b));
      const cd l2 = std::polar(1.0, 2 * PI * std::sqrt(2.0) * (a - b));
      const cd expect = 1.0 * l1 + 4.0 * l2;
      CHECK(std::abs(T.gram(x, a, b) - expect) < 1e-12);
    }
  CHECK(T.peripheral_point_spectrum().size() == 2);
}

TEST_CASE("matrix power bound dominates every computed power norm") {
  const OperatorModel T = OperatorModel::parse("mat:0.5,4,0,0.6");
  Eigen::Matrix2d A;
  A << 0.5, 4, 0, 0.6;
  Eigen::Matrix2d P = Eigen::Matrix2d::Identity();
  double sup = 1;
  for (int n = 1; n <= 400; ++n) {
    P = P * A;
    sup = std::max(sup, Eigen::JacobiSVD<Eigen::Matrix2d>(P).singularValues()(0));
  }
  const PowerBound pb = T.power_bound(1000);
  CHECK(pb.M >= sup * (1 - 1e-12));
  CHECK(pb.M <= sup * 1.01);
}

TEST_CASE("model parse errors") {
  CHECK_THROWS_AS(OperatorModel::parse("diag:1.5"), Error);
  CHECK_THROWS_AS(OperatorModel::parse("mat:1,0,0,1"), Error);
  CHECK_THROWS_AS(OperatorModel::parse("mat:1,2,3"), Error);
  CHECK_THROWS_AS(OperatorModel::parse("simshift:0,1"), Error);
  CHECK_THROWS_AS(OperatorModel::parse("rotate"), Error);
  CHECK_THROWS_AS(OperatorModel::parse("diagu:1/2").check_vector(VectorModel::unit(3)), Error);
}

TEST_CASE("JGdL split of a diagonal model") {
  const auto split = jgdl_split(OperatorModel::parse("diag:1@sqrt2,0.5,1,0.9@1/3"));
  CHECK(split.x1 == std::vector<std::int64_t>{1, 3});
  CHECK(split.x2 == std::vector<std::int64_t>{2, 4});
  CHECK_THROWS_AS(jgdl_split(OperatorModel::shift()), Error);
}

TEST_CASE("spec strings round-trip") {
  for (const char* s : {"shift", "simshift:pattern=1,2,3/2", "diagu:1/3,sqrt2", "diag:1/2,1@sqrt2", "mat:0.5,0.1,0,0.25"}) {
    const OperatorModel m = OperatorModel::parse(s);
    CHECK(OperatorModel::parse(m.str()).str() == m.str());
  }
  const VectorModel v = VectorModel::parse("coords:offset=-1;1/2,0,3");
  CHECK(VectorModel::parse(v.str()).str() == v.str());
  CHECK(VectorModel::parse(v.str()).coefficients() == v.coefficients());
}
