#pragma once

#include <complex>

namespace cuelab {

/// E_{U(N)}[exp(s Re log Z(0) + t Im log Z(0))] from the Barnes-G closed form.
///
/// t = 0 is evaluated with barnes_g at real points. For t != 0 the G ratios are
/// telescoped into prod_{j=1}^N Gamma(j) Gamma(j+s) / (Gamma(j+a) Gamma(j+conj(a))),
/// a = (s + it)/2. Requires s > -1.
double joint_mgf_rhs(double s, double t, int n);

/// The telescoped Gamma-product form of joint_mgf_rhs, valid for any real t.
double joint_mgf_gamma_product(double s, double t, int n);

/// Q(j, s, t) = (j + (it - s)/2)(j + (it + s)/2) / (j (j + it)).
std::complex<double> q_factor(int j, double s, double t);

/// E[exp(i(t rho_j + s sigma_j))] = Gamma(j) Gamma(j+it) / (Gamma(j+(it-s)/2) Gamma(j+(it+s)/2)),
/// where rho_j + i sigma_j = log(1 - sqrt(beta_{1,j-1}) e^{i phi}).
std::complex<double> beta_charfn(int j, double s, double t);

struct TruncatedProduct {
  std::complex<double> value;
  double tail_estimate = 0;  // ~ |1 - prod_{k > kmax} Q|
};

/// prod_{k=j}^{kmax} Q(k, s, t).
TruncatedProduct beta_charfn_product(int j, double s, double t, int kmax);

/// sum_{k>=1} ((k ^ N) / k^2)(1 - cos(k mu / N)): the second moment of the
/// Re (equivalently Im) log Z increment over an arc of length mu / N.
///
/// The tail k > N uses sum_{k>=1} (1 - cos kx)/k^2 = pi x / 2 - x^2 / 4 on [0, 2 pi].
double oscillation_variance_exact(int n, double mu);

/// 1 + gamma + f(mu): the large-N limit of oscillation_variance_exact.
double oscillation_variance_asymptotic(double mu);

/// Sine-kernel pair density N^2 [1 - (sin(N d/2) / (N sin(d/2)))^2] w.r.t. (dtheta/2pi)^2.
double two_point_correlation(int n, double delta);

/// Expected number of unordered eigenvalue pairs at circular distance <= eps/N
/// under Haar measure on U(N): int_0^{eps/N} rho(d) dd / (2 pi), the rotation
/// variable already integrated out. Requires eps/N <= pi.
double expected_close_pairs(int n, double eps);

}  // namespace cuelab
