#include "cuelab/moments.hpp"

#include <cmath>
#include <numbers>

#include "cuelab/errors.hpp"
#include "cuelab/quadrature.hpp"
#include "cuelab/special_functions.hpp"

namespace cuelab {
namespace {
constexpr double kPi = std::numbers::pi;

void check_mgf_domain(double s, int n) {
  if (n < 1) throw Error(ErrorKind::InvalidDimension, "N must be >= 1");
  if (!(s > -1)) throw Error(ErrorKind::OutOfDomain, "moment formula needs Re(s +- it) > -1");
}
}  // namespace

double joint_mgf_gamma_product(double s, double t, int n) {
  check_mgf_domain(s, n);
  const std::complex<double> a(s / 2, t / 2);
  std::complex<double> log_value = 0;
  for (int j = 1; j <= n; ++j) {
    log_value += std::lgamma(double(j)) + std::lgamma(j + s) - log_gamma(double(j) + a) -
                 log_gamma(double(j) + std::conj(a));
  }
  return std::exp(log_value).real();
}

double joint_mgf_rhs(double s, double t, int n) {
  check_mgf_domain(s, n);
  if (t != 0) return joint_mgf_gamma_product(s, t, n);
  const double nn = n;
  const double log_value = 2 * log_barnes_g(1 + s / 2) + log_barnes_g(1 + nn) +
                           log_barnes_g(1 + nn + s) - 2 * log_barnes_g(1 + nn + s / 2) -
                           log_barnes_g(1 + s);
  return std::exp(log_value);
}

std::complex<double> q_factor(int j, double s, double t) {
  if (j < 1) throw Error(ErrorKind::InvalidArgument, "j must be >= 1");
  const std::complex<double> i(0, 1);
  const double jj = j;
  return (jj + (i * t - s) / 2.0) * (jj + (i * t + s) / 2.0) / (jj * (jj + i * t));
}

std::complex<double> beta_charfn(int j, double s, double t) {
  if (j < 1) throw Error(ErrorKind::InvalidArgument, "j must be >= 1");
  const std::complex<double> i(0, 1);
  const double jj = j;
  const auto log_value = log_gamma(jj) + log_gamma(jj + i * t) - log_gamma(jj + (i * t - s) / 2.0) -
                         log_gamma(jj + (i * t + s) / 2.0);
  return std::exp(log_value);
}

TruncatedProduct beta_charfn_product(int j, double s, double t, int kmax) {
  if (j < 1 || kmax < j) throw Error(ErrorKind::InvalidArgument, "need 1 <= j <= kmax");
  TruncatedProduct out{1.0, 0.0};
  for (int k = j; k <= kmax; ++k) out.value *= q_factor(k, s, t);
  // log Q(k) = -(s^2 + t^2) / (4 k^2) + O(k^-3)
  out.tail_estimate = (s * s + t * t) / (4.0 * kmax);
  return out;
}

double oscillation_variance_exact(int n, double mu) {
  if (n < 1) throw Error(ErrorKind::InvalidDimension, "N must be >= 1");
  const double alpha = std::abs(mu) / n;
  double head = 0;      // sum_{k<=N} (1 - cos k alpha) / k
  double head_sq = 0;   // sum_{k<=N} (1 - cos k alpha) / k^2
  for (int k = 1; k <= n; ++k) {
    const double h = std::sin(0.5 * k * alpha);
    const double one_minus_cos = 2 * h * h;
    head += one_minus_cos / k;
    head_sq += one_minus_cos / (double(k) * k);
  }
  double x = std::fmod(alpha, 2 * kPi);
  const double full = kPi * x / 2 - x * x / 4;
  return head + n * (full - head_sq);
}

double oscillation_variance_asymptotic(double mu) { return 1 + kEulerGamma + f_mu(mu); }

double two_point_correlation(int n, double delta) {
  if (n < 1) throw Error(ErrorKind::InvalidDimension, "N must be >= 1");
  const double d = std::abs(std::remainder(delta, 2 * kPi));  // circular distance in [0, pi]
  const double nn = n;
  const double h = d / 2;
  if (nn * h < 1e-4) return nn * nn * (nn * nn - 1) * h * h / 3;  // 1 - r^2 ~ (N^2 - 1) h^2 / 3
  const double r = std::sin(nn * h) / (nn * std::sin(h));
  return std::max(0.0, nn * nn * (1 - r * r));
}

double expected_close_pairs(int n, double eps) {
  if (!(eps > 0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
  const double upper = eps / n;
  if (upper > kPi) throw Error(ErrorKind::InvalidArgument, "eps / N must not exceed pi");
  const auto res = integrate([n](double d) { return two_point_correlation(n, d); }, 0, upper,
                             1e-14, 1e-12);
  return res.value / (2 * kPi);
}

}  // namespace cuelab
