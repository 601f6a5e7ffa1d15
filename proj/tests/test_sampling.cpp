#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cuelab/sampling.hpp"
#include "cuelab/spectrum.hpp"
#include "cuelab/stats.hpp"

using namespace cuelab;
using Vec = ComplexVector<double>;
using Mat = ComplexMatrix<double>;
constexpr double kPi = std::numbers::pi;

namespace {

Vec basis(int j) {
  Vec e = Vec::Zero(j);
  e(j - 1) = 1;
  return e;
}

// diag(R(x_j), I_{N-j}) as a dense matrix.
Mat embedded(const Vec& x, int n) {
  Mat m = Mat::Identity(n, n);
  const int j = static_cast<int>(x.size());
  m.topLeftCorner(j, j) = reflection_matrix(x).matrix();
  return m;
}

// Product R(x_N) diag(R(x_{N-1}), 1) ... diag(R(x_1), I) by plain multiplication.
Mat product_oracle(const ReflectionChain<double>& chain) {
  const int n = chain.dim();
  Mat m = Mat::Identity(n, n);
  for (int j = n; j >= 1; --j) m = m * embedded(chain.vectors[j - 1], n);
  return m;
}

}  // namespace

TEST_CASE("sphere sampling") {
  RngStream rng(11);
  CHECK_THROWS_AS(sample_unit_sphere(0, rng), Error);
  try {
    sample_unit_sphere(0, rng);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidDimension);
  }
  for (int i = 0; i < 100; ++i) CHECK(std::abs(std::abs(sample_unit_sphere(1, rng)(0)) - 1) < 1e-15);
  CHECK(std::abs(sample_unit_sphere(3, rng).norm() - 1) <= 1e-12);

  SUBCASE("|<x, e_j>|^2 follows Beta(1, j - 1)") {
    for (int j : {2, 5}) {
      std::vector<double> v;
      for (int i = 0; i < 100000; ++i) v.push_back(std::norm(sample_unit_sphere(j, rng)(j - 1)));
      const auto ks = ks_one_sample(v, [j](double x) { return 1 - std::pow(1 - x, j - 1); });
      CHECK(ks.p_value >= 0.01);
    }
  }

  SUBCASE("argument of x_1 is uniform") {
    std::vector<double> v;
    for (int i = 0; i < 20000; ++i) v.push_back(wrap_angle(std::arg(sample_unit_sphere(1, rng)(0))));
    CHECK(ks_one_sample(v, [](double x) { return x / kTwoPi; }).p_value >= 0.01);
  }
}

TEST_CASE("reflection matrix contract") {
  for (int j = 1; j <= 16; ++j) CHECK(reflection_matrix(basis(j)).matrix() == Mat::Identity(j, j));

  Vec minus_one(1);
  minus_one(0) = -1;
  CHECK(std::abs(reflection_matrix(minus_one)(0, 0) + 1.0) < 1e-15);

  Vec bad = Vec::Ones(3);
  CHECK_THROWS_AS(reflection_matrix(bad), Error);

  RngStream rng(12);
  for (int j = 1; j <= 16; ++j) {
    for (int trial = 0; trial < 1000; ++trial) {
      const Vec x = sample_unit_sphere(j, rng);
      const Mat r = reflection_matrix(x).matrix();  // constructor certifies unitarity
      REQUIRE((r * basis(j) - x).norm() <= 1e-10);
      // image(I - R) within span(e_j - x): I - R annihilates the orthogonal complement.
      const Vec v = basis(j) - x;
      const Mat projector = Mat::Identity(j, j) - v * v.adjoint() / v.squaredNorm();
      REQUIRE(((Mat::Identity(j, j) - r).adjoint() * projector).norm() <= 1e-10);
      // det R from the closed form equals an LU determinant.
      REQUIRE(std::abs(reflection_determinant(x) - r.determinant()) <= 1e-10);
    }
  }
}

TEST_CASE("haar_unitary assembles the reflection product") {
  RngStream rng(13);
  for (int n : {1, 2, 5, 9, 16}) {
    const auto s = haar_unitary(n, rng);
    CHECK(s.chain.dim() == n);
    CHECK(s.chain.is_normalized());
    CHECK((s.matrix.matrix() - product_oracle(s.chain)).cwiseAbs().maxCoeff() <= 1e-12);
  }
  const auto one = haar_unitary(1, rng);
  CHECK(std::abs(std::abs(one.matrix(0, 0)) - 1) < 1e-15);
  CHECK(std::abs(one.matrix(0, 0) - one.chain.vectors[0](0)) < 1e-15);
}

TEST_CASE("determinism: equal streams give bit-identical matrices") {
  RngStream a(99, 7), b(99, 7), c(99, 8);
  const auto ua = haar_unitary(12, a).matrix.matrix();
  const auto ub = haar_unitary(12, b).matrix.matrix();
  const auto uc = haar_unitary(12, c).matrix.matrix();
  CHECK(ua == ub);
  CHECK(ua != uc);
  RngStream q1(5, 1), q2(5, 1);
  CHECK(haar_unitary_qr_oracle(6, q1).matrix() == haar_unitary_qr_oracle(6, q2).matrix());
}

TEST_CASE("special unitary determinant is forced") {
  RngStream rng(14);
  for (int n = 1; n <= 32; ++n) {
    for (int i = 0; i < 100; ++i) {
      const double theta = rng.uniform(0, kTwoPi);
      const auto s = haar_special_unitary(n, theta, rng);
      REQUIRE(std::abs(s.matrix.determinant() - std::polar(1.0, n * theta)) <= 1e-8);
    }
  }
  CHECK(std::abs(haar_special_unitary(4, 0.0, rng).matrix.determinant() - 1.0) <= 1e-8);
  CHECK(std::abs(haar_special_unitary(4, kPi / 2, rng).matrix.determinant() - 1.0) <= 1e-8);
}

TEST_CASE("special and unitary samplers share x_2..x_N on equal streams") {
  RngStream a(21, 3), b(21, 3);
  const auto u = haar_unitary(6, a);
  const auto su = haar_special_unitary(6, 0.4, b);
  for (int j = 2; j <= 6; ++j) CHECK(u.chain.vectors[j - 1] == su.chain.vectors[j - 1]);
}

TEST_CASE("coupled pair") {
  RngStream rng(15);
  CHECK_THROWS_AS(coupled_pair(1, 0.0, rng), Error);
  for (int n : {2, 8, 32}) {
    for (int i = 0; i < 1000; ++i) {
      const double theta = rng.uniform(0, kTwoPi);
      const auto pair = coupled_pair(n, theta, rng);
      const LogZ a = log_z_from_chain(pair.special.chain);
      const LogZ b = log_z_from_chain(pair.unitary.chain);
      REQUIRE(std::abs(a.im - b.im) <= kPi);
      // Only x_1 differs, so the Re difference is log|1 - x_1| - log|1 - x'_1|.
      const double direct = std::log(std::abs(1.0 - pair.special.chain.vectors[0](0))) -
                            std::log(std::abs(1.0 - pair.unitary.chain.vectors[0](0)));
      REQUIRE(std::abs((a.re - b.re) - direct) <= 1e-9);
      REQUIRE(std::abs(pair.special.matrix.determinant() - std::polar(1.0, n * theta)) <= 1e-8);
    }
  }
  SUBCASE("identical chains give identical Z(0)") {
    RngStream r(16);
    auto chain = sample_reflection_chain(5, r);
    auto copy = chain;
    const LogZ a = log_z_from_chain(chain), b = log_z_from_chain(copy);
    CHECK(a.re == b.re);
    CHECK(a.im == b.im);
  }
}

TEST_CASE("QR oracle and reflection sampler agree on E|tr U|^2") {
  RngStream rng(17);
  std::vector<double> refl, qr;
  for (int i = 0; i < 20000; ++i) {
    RngStream a = rng.child(2 * i), b = rng.child(2 * i + 1);
    refl.push_back(std::norm(haar_unitary(8, a).matrix.trace()));
    qr.push_back(std::norm(haar_unitary_qr_oracle(8, b).trace()));
  }
  CHECK(std::abs(MonteCarloEstimate::from_samples(refl, 17).z_score(1.0)) <= 4);
  CHECK(std::abs(MonteCarloEstimate::from_samples(qr, 17).z_score(1.0)) <= 4);
  CHECK(ks_two_sample(refl, qr).p_value >= 0.01);
}

TEST_CASE("trace_power matches repeated multiplication") {
  RngStream rng(18);
  const auto u = haar_unitary(5, rng).matrix;
  Mat power = Mat::Identity(5, 5);
  for (int p = 1; p <= 7; ++p) {
    power = power * u.matrix();
    CHECK(std::abs(u.trace_power(p) - power.trace()) <= 1e-12);
    CHECK(std::abs(u.trace_power(-p) - std::conj(power.trace())) <= 1e-12);
  }
  CHECK(u.trace_power(0) == std::complex<double>(5, 0));
}

TEST_CASE("single and extended precision instantiations") {
  RngStream rng(19);
  const auto f = haar_unitary<float>(8, rng);
  CHECK(UnitaryMatrix<float>::unitarity_defect(f.matrix.matrix()) <= 1e-4);
  const auto l = haar_special_unitary<long double>(8, 0.3, rng);
  CHECK(std::abs(l.matrix.determinant() - std::polar<long double>(1, 8 * 0.3L)) <= 1e-12L);
  const auto spec = eigenangles(f.matrix);
  CHECK(spec.dim() == 8);
}
