#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cuelab/errors.hpp"
#include "support.hpp"

using namespace cuelab;
using cuelab::testing::random_ensemble;
using cuelab::testing::su_spectrum;

namespace {

bool throws_kind(ErrorKind kind, auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

// Coefficients of prod_k (1 - z e^{i a_k}), lowest degree first.
std::vector<std::complex<double>> expand(const Spectrum& s) {
  std::vector<std::complex<double>> c{1.0};
  for (double a : s.angles()) {
    c.push_back(0.0);
    const auto w = -std::polar(1.0, a);
    for (std::size_t i = c.size() - 1; i > 0; --i) c[i] += w * c[i - 1];
  }
  return c;
}

}  // namespace

TEST_CASE("ensemble validation") {
  RngStream rng(1);
  const Spectrum a = su_spectrum(6, rng), b = su_spectrum(6, rng), c = su_spectrum(5, rng);
  CHECK_NOTHROW(CombinationEnsemble({1.0, 2.0}, {a, b}));
  CHECK(throws_kind(ErrorKind::InvalidEnsemble, [&] { CombinationEnsemble({}, {}); }));
  CHECK(throws_kind(ErrorKind::InvalidEnsemble, [&] { CombinationEnsemble({1.0, 0.0}, {a, b}); }));
  CHECK(throws_kind(ErrorKind::InvalidEnsemble, [&] { CombinationEnsemble({1.0, 1.0}, {a, c}); }));
  CHECK(throws_kind(ErrorKind::InvalidEnsemble, [&] { CombinationEnsemble({1.0}, {Spectrum({0.1, 0.2})}); }));
  CHECK(throws_kind(ErrorKind::InvalidEnsemble, [&] { CombinationEnsemble({1.0, 1.0}, {a}); }));
}

TEST_CASE("evaluate matches the expanded polynomial") {
  const auto ens = random_ensemble({1.0, -0.5, 2.0}, 9, 2, 0);
  std::vector<std::complex<double>> coeff(10, 0.0);
  for (int j = 0; j < 3; ++j) {
    const auto c = expand(ens.spectrum(j));
    for (int i = 0; i <= 9; ++i) coeff[i] += ens.coefficient(j) * c[i];
  }
  for (auto z : {std::complex<double>(0.3, 0.1), std::polar(1.0, 1.7), std::complex<double>(-1.2, 0.4)}) {
    std::complex<double> horner = 0;
    for (int i = 9; i >= 0; --i) horner = horner * z + coeff[i];
    CHECK(std::abs(ens.evaluate(z) - horner) <= 1e-12 * ens.magnitude(z));
  }
}

TEST_CASE("real rotation") {
  SUBCASE("identity matrix") {
    for (int n : {1, 2, 5, 8}) {
      const CombinationEnsemble ens({1.0}, {Spectrum(std::vector<double>(n, 0.0))});
      for (double th : {0.3, 1.0, 2.5, 4.0, 6.0}) {
        const double expected = std::pow(-2 * std::sin(th / 2), n);
        CHECK(real_rotation(ens, th) == doctest::Approx(expected).epsilon(1e-12));
        CHECK(real_rotation_product(ens, th) == doctest::Approx(expected).epsilon(1e-12));
        // The magnitude is 2^N |sin(theta/2)|^N.
        CHECK(std::abs(real_rotation(ens, th)) == doctest::Approx(std::pow(2 * std::sin(th / 2), n)));
      }
    }
  }
  SUBCASE("identical spectra cancel") {
    RngStream rng(3);
    const Spectrum s = su_spectrum(7, rng);
    const CombinationEnsemble ens({1.0, -1.0}, {s, s});
    for (double th : {0.1, 2.0, 5.0}) CHECK(real_rotation(ens, th) == 0);
  }
  SUBCASE("imaginary residual and the real-arithmetic route") {
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> unit(0, kTwoPi);
    for (int k = 0; k < 1000; ++k) {
      const auto ens = random_ensemble({1.0, 0.7}, 2 + k % 30, 4, k);
      const double th = unit(gen);
      const auto r = rotated_sum(ens, th);
      REQUIRE(std::abs(r.imag) <= 1e-8 * r.scale + 1e-10);
      REQUIRE(std::abs(real_rotation_product(ens, th) - r.real) <= 1e-10 * r.scale + 1e-12);
    }
  }
}

TEST_CASE("sign changes") {
  SUBCASE("single term: exactly N") {
    for (int k = 0; k < 50; ++k) {
      const int n = 1 + k % 40;
      CHECK(sign_changes(random_ensemble({1.0}, n, 5, k)) == n);
    }
  }
  SUBCASE("degenerate combination") {
    RngStream rng(6);
    const Spectrum s = su_spectrum(8, rng);
    CHECK(throws_kind(ErrorKind::DegenerateCombination,
                      [&] { sign_changes(CombinationEnsemble({1.0, -1.0}, {s, s})); }));
  }
  SUBCASE("bounded by the root oracle, N = 8") {
    int equal = 0;
    for (int k = 0; k < 100; ++k) {
      const auto ens = random_ensemble({1.0, 1.0}, 8, 7, k);
      const int sc = sign_changes(ens);
      const int oracle = circle_root_count(roots_oracle(ens));
      REQUIRE(sc <= oracle);
      REQUIRE(oracle <= 8);
      equal += sc == oracle;
    }
    CHECK(equal >= 95);
  }
  SUBCASE("invariant chain for N <= 16") {
    for (int k = 0; k < 200; ++k) {
      const auto ens = random_ensemble({1.0, -0.6, 1.3}, 2 + k % 15, 8, k);
      const auto roots = roots_oracle(ens);
      const int sc = sign_changes(ens);
      REQUIRE(sc <= circle_root_count(roots));
      REQUIRE(circle_root_count(roots) <= roots.effective_degree);
      REQUIRE(roots.effective_degree <= ens.dim());
    }
  }
  SUBCASE("restricted count adds up over a partition") {
    const auto ens = random_ensemble({1.0, 1.0}, 12, 9, 0);
    const int whole = sign_changes_on(ens, 0.0, kTwoPi, 12 * 64);
    const int parts = sign_changes_on(ens, 0.0, std::numbers::pi, 12 * 32) +
                      sign_changes_on(ens, std::numbers::pi, kTwoPi, 12 * 32);
    CHECK(whole == parts);
  }
}

TEST_CASE("roots oracle") {
  SUBCASE("single term gives the conjugate eigenvalues") {
    RngStream rng(10);
    const Spectrum s = su_spectrum(6, rng);
    const auto roots = roots_oracle(CombinationEnsemble({1.0}, {s}));
    REQUIRE(roots.roots.size() == 6);
    CHECK(roots.effective_degree == 6);
    for (double a : s.angles()) {
      double best = 1e9;
      for (auto z : roots.roots) best = std::min(best, std::abs(z - std::polar(1.0, -a)));
      CHECK(best <= 1e-8);
    }
    CHECK(circle_root_count(roots) == 6);
  }
  SUBCASE("cancelling leading coefficients drop the degree") {
    for (int k = 0; k < 20; ++k) {
      const auto roots = roots_oracle(random_ensemble({1.0, -1.0}, 8, 11, k));
      CHECK(roots.effective_degree <= 7);
    }
  }
  SUBCASE("symmetry, residuals and parity at N = 8") {
    int parity_ok = 0;
    for (int k = 0; k < 100; ++k) {
      const auto ens = random_ensemble({1.0, 1.0}, 8, 12, k);
      const auto roots = roots_oracle(ens);
      REQUIRE(roots.is_symmetric(1e-6));
      for (auto z : roots.roots) REQUIRE(std::abs(ens.evaluate(z)) <= 1e-6 * ens.magnitude(z));
      parity_ok += (8 - circle_root_count(roots)) % 2 == 0;
    }
    CHECK(parity_ok == 100);
  }
  SUBCASE("toy root sets") {
    RootSet toy{{2.0, 0.5}, 2};
    CHECK(circle_root_count(toy) == 0);
    CHECK(toy.is_symmetric());
    CHECK_FALSE(RootSet{{2.0, 0.4}, 2}.is_symmetric());
    CHECK(RootSet{{0.0, 1.0}, 1}.zero_roots() == 1);
  }
  SUBCASE("degenerate") {
    RngStream rng(13);
    const Spectrum s = su_spectrum(5, rng);
    CHECK(throws_kind(ErrorKind::DegenerateCombination,
                      [&] { roots_oracle(CombinationEnsemble({2.0, -2.0}, {s, s})); }));
  }
}

TEST_CASE("winding number") {
  SUBCASE("single term has no zeros inside") {
    for (int k = 0; k < 20; ++k) CHECK(winding_inside_count(random_ensemble({1.0}, 10, 14, k), 0.9) == 0);
  }
  SUBCASE("planted root") {
    // (1 - z)^2 - (1 + z)^2 / 9 vanishes at 1/2 and 2; a shared det-1 factor adds circle roots only.
    RngStream rng(15);
    const Spectrum v = su_spectrum(6, rng);
    auto with = [&](double a) {
      auto angles = v.angles();
      angles.insert(angles.end(), {a, a});
      return Spectrum(angles);
    };
    const CombinationEnsemble planted({1.0, -1.0 / 9}, {with(0.0), with(std::numbers::pi)});
    CHECK(std::abs(planted.evaluate(0.5)) <= 1e-12 * planted.magnitude(0.5));
    CHECK(winding_inside_count(planted, 0.9) == 1);
    CHECK(winding_inside_count(planted, 0.4) == 0);
    const CombinationEnsemble mirrored({1.0, -1.0 / 9}, {with(std::numbers::pi), with(0.0)});
    CHECK(std::abs(mirrored.evaluate(-0.5)) <= 1e-12 * mirrored.magnitude(-0.5));
    CHECK(winding_inside_count(mirrored, 0.9) == 1);
  }
  SUBCASE("matches the oracle away from the circle") {
    for (int k = 0; k < 20; ++k) {
      const auto ens = random_ensemble({1.0, 0.3}, 10, 15, k);
      const auto roots = roots_oracle(ens);
      int inside = 0;
      for (auto z : roots.roots) inside += std::abs(z) < 0.9;
      CHECK(winding_inside_count(ens, 0.9) == inside);
    }
  }
  SUBCASE("cross-check against the oracle, N = 8") {
    int agree = 0;
    for (int k = 0; k < 100; ++k) {
      const auto ens = random_ensemble({1.0, 1.0}, 8, 16, k);
      const auto roots = roots_oracle(ens);
      agree += roots.effective_degree - 2 * winding_inside_count_retry(ens, 0.99) ==
               circle_root_count(roots, 1e-4);
    }
    CHECK(agree >= 90);
  }
  SUBCASE("circle count is an upper bound for sign changes") {
    for (int k = 0; k < 30; ++k) {
      const auto ens = random_ensemble({1.0, 1.0}, 24, 17, k);
      CHECK(sign_changes(ens) <= winding_circle_count(ens));
    }
  }
}
