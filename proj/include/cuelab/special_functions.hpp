#pragma once

#include <complex>

namespace cuelab {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

/// log Gamma(z) for complex z (Lanczos, g = 7). The imaginary part is some
/// branch of arg Gamma(z); only exp() of sums and differences is meaningful.
std::complex<double> log_gamma(std::complex<double> z);

/// Barnes G-function for real z > 0; G(1) = G(2) = G(3) = 1, G(z+1) = Gamma(z) G(z).
double barnes_g(double z);
double log_barnes_g(double z);

/// Si(z) = int_0^z sin x / x dx.
double si(double z);
/// Ci(z) = -int_z^inf cos x / x dx, z > 0.
double ci(double z);
/// f(mu) = log mu + (pi/2) mu - cos mu - Ci(mu) - mu Si(mu), mu > 0.
double f_mu(double mu);

}  // namespace cuelab
