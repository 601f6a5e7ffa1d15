#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cuelab/moments.hpp"
#include "cuelab/quadrature.hpp"
#include "cuelab/sampling.hpp"
#include "cuelab/special_functions.hpp"
#include "cuelab/spectrum.hpp"
#include "cuelab/stats.hpp"

using namespace cuelab;
constexpr double kPi = std::numbers::pi;

TEST_CASE("joint moment formula, real slice") {
  for (int n : {1, 5, 20}) CHECK(joint_mgf_rhs(0, 0, n) == doctest::Approx(1).epsilon(1e-14));
  for (int n = 1; n <= 64; ++n) REQUIRE(std::abs(joint_mgf_rhs(2, 0, n) - (n + 1)) <= 1e-10);
  // E|Z|^4 = (N+1)(N+2)^2(N+3)/12
  for (int n : {1, 2, 7, 30}) {
    const double expected = (n + 1.0) * (n + 2) * (n + 2) * (n + 3) / 12;
    CHECK(joint_mgf_rhs(4, 0, n) == doctest::Approx(expected).epsilon(1e-10));
  }
  // Barnes-G route and Gamma-product route agree for t = 0.
  for (double s : {-0.7, -0.2, 0.5, 1.0, 3.3})
    for (int n : {1, 4, 16})
      CHECK(joint_mgf_rhs(s, 0, n) == doctest::Approx(joint_mgf_gamma_product(s, 0, n)).epsilon(1e-10));
  CHECK_THROWS_AS(joint_mgf_rhs(-1.0, 0, 4), Error);
  CHECK_THROWS_AS(joint_mgf_rhs(1.0, 0, 0), Error);
}

TEST_CASE("joint moment formula against Monte Carlo") {
  const int samples = 20000;
  struct Case {
    double s, t;
    int n;
  };
  for (const Case c : {Case{2, 0, 8}, Case{1, 0, 8}, Case{1, 1, 4}, Case{0.5, -1.5, 6}, Case{0, 2, 3}}) {
    std::vector<double> values;
    for (int k = 0; k < samples; ++k) {
      RngStream rng(41, k);
      const LogZ l = log_z_from_chain(sample_reflection_chain(c.n, rng));
      values.push_back(std::exp(c.s * l.re + c.t * l.im));
    }
    const auto e = MonteCarloEstimate::from_samples(values, 41);
    CAPTURE(c.s);
    CAPTURE(c.t);
    CHECK(std::abs(e.z_score(joint_mgf_rhs(c.s, c.t, c.n))) <= 4);
  }
}

TEST_CASE("Q factor") {
  CHECK(q_factor(3, 0, 0) == std::complex<double>(1, 0));
  CHECK(std::abs(q_factor(1, 8, 0) - std::complex<double>(-15, 0)) <= 1e-14);

  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> unit(0, 1);
  auto point = [&](double r) {
    const double a = unit(gen) * kTwoPi;
    return std::pair{r * std::cos(a), r * std::sin(a)};
  };
  for (int j = 1; j <= 50; ++j) {
    for (int i = 0; i < 1000; ++i) {
      // s^2 + t^2 >= 8 j^2
      auto [s1, t1] = point(std::sqrt(8.0) * j * (1 + 5 * unit(gen)));
      const double r1 = std::hypot(s1, t1);
      REQUIRE(std::abs(q_factor(j, s1, t1)) >= std::max(1.0, r1 / (8 * j)) * (1 - 1e-12));
      // j^2 <= s^2 + t^2 <= 8 j^2
      auto [s2, t2] = point(j * (1 + (std::sqrt(8.0) - 1) * unit(gen)));
      REQUIRE(std::abs(q_factor(j, s2, t2)) <= 1 + 1e-12);
      // s^2 + t^2 <= j^2
      auto [s3, t3] = point(j * unit(gen));
      const double r3 = s3 * s3 + t3 * t3;
      REQUIRE(std::abs(q_factor(j, s3, t3)) <= std::exp(-r3 / (10.0 * j * j)) * (1 + 1e-12));
    }
  }
}

TEST_CASE("beta characteristic function") {
  CHECK(std::abs(beta_charfn(4, 0, 0) - 1.0) <= 1e-14);
  const auto product = beta_charfn_product(3, 1, 1, 10000);
  CHECK(std::abs(product.value - beta_charfn(3, 1, 1)) <= 1e-4);
  CHECK(std::abs(product.value - beta_charfn(3, 1, 1)) <= 2 * product.tail_estimate);

  std::mt19937_64 gen(43);
  std::uniform_real_distribution<double> unit(0, 1);
  for (int j = 1; j <= 30; ++j) {
    for (int i = 0; i < 200; ++i) {
      const double r = std::sqrt(8.0) * j * unit(gen), a = kTwoPi * unit(gen);
      const double s = r * std::cos(a), t = r * std::sin(a);
      REQUIRE(std::abs(beta_charfn(j, s, t)) <= std::exp(-(s * s + t * t) / (30.0 * j)) * (1 + 1e-12));
    }
  }
}

TEST_CASE("beta characteristic function against sampling") {
  // rho + i sigma = log(1 - sqrt(B) e^{i phi}), B ~ Beta(1, j - 1); Beta(1, 0) is the point mass at 1.
  auto mc = [](int j, double s, double t, int samples) {
    std::mt19937_64 gen(44 + j);
    std::uniform_real_distribution<double> unit(0, 1);
    std::vector<double> re, im;
    for (int k = 0; k < samples; ++k) {
      const double u = unit(gen);
      const double b = j == 1 ? 1.0 : 1 - std::pow(1 - u, 1.0 / (j - 1));
      const auto l = std::log(1.0 - std::sqrt(b) * std::polar(1.0, kTwoPi * unit(gen)));
      const auto v = std::exp(std::complex<double>(0, t * l.real() + s * l.imag()));
      re.push_back(v.real());
      im.push_back(v.imag());
    }
    return std::pair{MonteCarloEstimate::from_samples(re, 0), MonteCarloEstimate::from_samples(im, 0)};
  };
  struct Case {
    int j;
    double s, t;
  };
  for (const Case c : {Case{5, 2, 0}, Case{2, 1, 1}, Case{1, 0.5, 0.7}, Case{8, -3, 2}}) {
    const auto expected = beta_charfn(c.j, c.s, c.t);
    const auto [re, im] = mc(c.j, c.s, c.t, 200000);
    CAPTURE(c.j);
    CHECK(std::abs(re.z_score(expected.real())) <= 4);
    CHECK(std::abs(im.z_score(expected.imag())) <= 4);
  }
}

TEST_CASE("oscillation variance series") {
  CHECK(oscillation_variance_exact(16, 0) == 0);
  for (double mu : {0.3, 2.0, 17.0}) CHECK(oscillation_variance_exact(9, mu) == oscillation_variance_exact(9, -mu));
  // Brute-force partial sums with the N/k^2 remainder bound.
  for (int n : {1, 8, 64})
    for (double mu : {0.5, 3.0, 8 * kPi}) {
      double sum = 0;
      const int kmax = 2000000;
      for (int k = 1; k <= kmax; ++k) sum += std::min(k, n) / (double(k) * k) * (1 - std::cos(k * mu / n));
      CAPTURE(n);
      CAPTURE(mu);
      CHECK(std::abs(oscillation_variance_exact(n, mu) - sum) <= 2.0 * n / kmax + 1e-9);
    }
  for (double mu : {1.0, 10.0, 100.0, 20 * kPi}) {
    CAPTURE(mu);
    CHECK(std::abs(oscillation_variance_exact(10000, mu) - (1 + kEulerGamma + f_mu(mu))) <= 0.05);
    CHECK(oscillation_variance_asymptotic(mu) == doctest::Approx(1 + kEulerGamma + f_mu(mu)));
  }
}

TEST_CASE("oscillation variance against Haar sampling") {
  const int n = 64, samples = 1000;
  const double mu = 8 * kPi;
  std::vector<double> values;
  for (int k = 0; k < samples; ++k) {
    RngStream rng(45, k);
    const auto spec = eigenangles(haar_unitary(n, rng).matrix);
    const double d = log_abs_z(spec, mu / n) - log_abs_z(spec, 0.0);
    values.push_back(d * d);
  }
  const auto e = MonteCarloEstimate::from_samples(values, 45);
  CHECK(std::abs(e.z_score(oscillation_variance_exact(n, mu))) <= 4);
}

TEST_CASE("two-point correlation") {
  CHECK(two_point_correlation(10, 0) == 0);
  CHECK(two_point_correlation(10, 1e-12) == doctest::Approx(0).epsilon(1e-12));
  CHECK(two_point_correlation(2, kPi) == doctest::Approx(4).epsilon(1e-14));
  for (int n = 2; n <= 64; ++n)
    for (int i = 1; i <= 200; ++i) {
      const double d = kPi * i / 200;
      const double rho = two_point_correlation(n, d);
      REQUIRE(rho >= 0);
      REQUIRE(rho <= std::pow(n, 4) * d * d / 6 * (1 + 1e-12));
    }
}

TEST_CASE("expected close pairs against two-fold quadrature") {
  for (int n : {8, 32}) {
    for (double eps : {0.5, 1.0, 2.0}) {
      const double h = eps / n;
      // (1/2) int_0^{2pi} int_{|a-b| <= h} rho(a - b) db da / (2 pi)^2, halved for unordered pairs
      const auto outer = integrate(
          [&](double a) {
            return integrate([&](double b) { return two_point_correlation(n, a - b); }, a - h, a + h, 1e-13, 1e-11)
                .value;
          },
          0, kTwoPi, 1e-12, 1e-10);
      const double oracle = 0.5 * outer.value / (kTwoPi * kTwoPi);
      CHECK(expected_close_pairs(n, eps) == doctest::Approx(oracle).epsilon(1e-8));
      CHECK(expected_close_pairs(n, eps) <= n * std::pow(eps, 3) / (36 * kPi));
    }
  }
}
