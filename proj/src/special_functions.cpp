#include "cuelab/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "cuelab/errors.hpp"

namespace cuelab {
namespace {

constexpr double kPi = std::numbers::pi;

constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// log G(1 + z) for z in [0, 1] from the Weierstrass-type product, with the
// product tail beyond n = kTerms summed analytically.
double log_barnes_g_unit(double z) {
  constexpr int kTerms = 4000;
  double sum = 0;
  for (int n = kTerms; n >= 1; --n) {
    const double nn = n;
    sum += nn * std::log1p(z / nn) - z + z * z / (2 * nn);
  }
  // sum_{n > M} [n log(1 + z/n) - z + z^2/(2n)] = sum_{k>=3} (-1)^{k+1} z^k / k * sum_{n>M} n^{1-k}
  const double m = kTerms;
  auto zeta_tail = [m](int p) {  // sum_{n > M} n^{-p}, Euler-Maclaurin
    return std::pow(m, 1 - p) / (p - 1) - 0.5 * std::pow(m, -p) + p * std::pow(m, -p - 1) / 12.0;
  };
  double tail = 0;
  double zk = z * z;
  for (int k = 3; k <= 8; ++k) {
    zk *= z;
    tail += ((k % 2) ? 1.0 : -1.0) * zk / k * zeta_tail(k - 1);
  }
  return 0.5 * z * std::log(2 * kPi) - 0.5 * ((1 + kEulerGamma) * z * z + z) + sum + tail;
}

}  // namespace

std::complex<double> log_gamma(std::complex<double> z) {
  if (z.real() < 0.5) {
    // Reflection: Gamma(z) Gamma(1 - z) = pi / sin(pi z).
    return std::log(kPi) - std::log(std::sin(kPi * z)) - log_gamma(1.0 - z);
  }
  z -= 1.0;
  std::complex<double> x = kLanczos[0];
  for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + double(i));
  const std::complex<double> t = z + 7.5;
  return 0.5 * std::log(2 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

double log_barnes_g(double z) {
  if (!(z > 0)) throw Error(ErrorKind::OutOfDomain, "Barnes G is evaluated for real z > 0 only");
  const double whole = std::floor(z);
  const double frac = z - whole;
  if (whole == 0) return log_barnes_g_unit(frac) - std::lgamma(frac);  // G(z) = G(z+1)/Gamma(z)
  // z = 1 + frac + k with k = whole - 1; G(1 + frac + k) = G(1 + frac) prod_{i<k} Gamma(1 + frac + i)
  double value = frac == 0 ? 0.0 : log_barnes_g_unit(frac);
  for (int i = 0; i < static_cast<int>(whole) - 1; ++i) value += std::lgamma(1 + frac + i);
  return value;
}

double barnes_g(double z) { return std::exp(log_barnes_g(z)); }

// Si and Ci share the evaluation: power series for small arguments, the
// continued fraction for E1(i x) otherwise.
namespace {

void cisi(double x, double& c, double& s) {
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  if (x <= 2.0) {
    // Si = sum (-1)^k x^{2k+1} / ((2k+1)(2k+1)!), Ci = gamma + log x + sum_{k>=1} (-1)^k x^{2k} / (2k (2k)!)
    double sum_s = 0, sum_c = 0;
    double term = x;  // x^{m} / m!
    for (int m = 1; m < 40; ++m) {
      if (m > 1) term *= x / m;
      const double contrib = term / m;
      if (m % 2 == 1) {
        sum_s += ((m / 2) % 2 ? -1.0 : 1.0) * contrib;
      } else {
        sum_c += ((m / 2) % 2 ? -1.0 : 1.0) * contrib;
      }
    }
    s = sum_s;
    c = kEulerGamma + std::log(x) + sum_c;
    return;
  }
  // Modified Lentz on E1(ix) = e^{-ix} / (1 + ix - 1^2/(3 + ix - 2^2/(5 + ix - ...)))
  std::complex<double> b(1.0, x);
  std::complex<double> cc = 1.0 / kTiny;
  std::complex<double> d = 1.0 / b;
  std::complex<double> h = d;
  for (int i = 2; i < 100000; ++i) {
    const double a = -static_cast<double>((i - 1) * (i - 1));
    b += 2.0;
    d = 1.0 / (a * d + b);
    cc = b + a / cc;
    const std::complex<double> del = cc * d;
    h *= del;
    if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < kEps) break;
  }
  h *= std::complex<double>(std::cos(x), -std::sin(x));
  c = -h.real();
  s = kPi / 2 + h.imag();
}

}  // namespace

double si(double z) {
  if (z < 0) return -si(-z);
  if (z == 0) return 0;
  double c, s;
  cisi(z, c, s);
  return s;
}

double ci(double z) {
  if (!(z > 0)) throw Error(ErrorKind::OutOfDomain, "Ci requires z > 0");
  double c, s;
  cisi(z, c, s);
  return c;
}

double f_mu(double mu) {
  if (!(mu > 0)) throw Error(ErrorKind::OutOfDomain, "f(mu) requires mu > 0");
  double c, s;
  cisi(mu, c, s);
  return std::log(mu) + mu * (kPi / 2 - s) - std::cos(mu) - c;
}

}  // namespace cuelab
