#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "cuelab/errors.hpp"
#include "cuelab/sampling.hpp"

namespace cuelab {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduce an angle to [0, 2 pi).
template <typename Scalar>
Scalar wrap_angle(Scalar a) {
  const Scalar two_pi = static_cast<Scalar>(kTwoPi);
  Scalar r = std::fmod(a, two_pi);
  if (r < 0) r += two_pi;
  if (r >= two_pi) r = 0;
  return r;
}

/// Circular distance between two angles, in [0, pi].
template <typename Scalar>
Scalar circular_distance(Scalar a, Scalar b) {
  const Scalar d = wrap_angle(a - b);
  return std::min(d, static_cast<Scalar>(kTwoPi) - d);
}

/// Sorted eigenangles in [0, 2 pi) and the determinant phase (sum of angles mod 2 pi).
template <typename Scalar = double>
class EigenangleSpectrum {
 public:
  EigenangleSpectrum() = default;

  explicit EigenangleSpectrum(std::vector<Scalar> angles) : angles_(std::move(angles)) {
    Scalar sum = 0;
    for (auto& a : angles_) {
      a = wrap_angle(a);
      sum += a;
    }
    std::sort(angles_.begin(), angles_.end());
    det_phase_ = wrap_angle(sum);
  }

  int dim() const { return static_cast<int>(angles_.size()); }
  const std::vector<Scalar>& angles() const { return angles_; }
  Scalar operator[](int k) const { return angles_[k]; }
  Scalar det_phase() const { return det_phase_; }

  /// Number of whole turns in the sum of angles: sum = 2 pi m + det_phase.
  long winding() const {
    Scalar sum = 0;
    for (auto a : angles_) sum += a;
    return std::lround(static_cast<double>((sum - det_phase_) / static_cast<Scalar>(kTwoPi)));
  }

  /// tr(U^p) = sum_j e^{i p theta_j}.
  std::complex<Scalar> trace_power(int p) const {
    std::complex<Scalar> s = 0;
    for (auto a : angles_) s += std::polar(Scalar(1), static_cast<Scalar>(p) * a);
    return s;
  }

 private:
  std::vector<Scalar> angles_;
  Scalar det_phase_ = 0;
};

using Spectrum = EigenangleSpectrum<double>;

/// log Z_U(t) with the per-factor principal-branch convention; im is never reduced mod 2 pi.
struct LogZ {
  double re = 0;
  double im = 0;
  std::complex<double> value() const { return {re, im}; }
};

/// Eigenangles of a unitary matrix via the complex Schur form.
///
/// For a normal matrix the Schur factor T is diagonal; the norm of the strictly
/// upper part of column k bounds the eigen-residual of angle k. Residuals above
/// 1e-8 N raise numerical-failure.
template <typename Scalar>
EigenangleSpectrum<Scalar> eigenangles(const UnitaryMatrix<Scalar>& u) {
  const int n = u.dim();
  Eigen::ComplexSchur<ComplexMatrix<Scalar>> schur(u.matrix(), false);
  if (schur.info() != Eigen::Success)
    throw Error(ErrorKind::NumericalFailure, "Schur iteration did not converge");
  const auto& t = schur.matrixT();
  double residual = 0;
  std::vector<Scalar> angles(n);
  for (int k = 0; k < n; ++k) {
    angles[k] = std::arg(t(k, k));
    if (k > 0) residual = std::max(residual, static_cast<double>(t.col(k).head(k).norm()));
  }
  if (!(residual <= std::max(1e-8, 1e2 * scalar_tolerance<Scalar>(0)) * n))
    throw Error(ErrorKind::NumericalFailure, "eigen-residual " + std::to_string(residual));
  return EigenangleSpectrum<Scalar>(std::move(angles));
}

/// Z_U(t) = det(I - e^{-it} U) = prod_j (1 - e^{i(theta_j - t)}).
template <typename Scalar>
std::complex<Scalar> z_value(const EigenangleSpectrum<Scalar>& spec, Scalar t) {
  std::complex<Scalar> z = 1;
  for (auto a : spec.angles()) z *= Scalar(1) - std::polar(Scalar(1), a - t);
  return z;
}

namespace detail {
inline constexpr double kSingularTol = 1e-12;

template <typename Scalar>
Scalar offset_or_throw(Scalar theta, Scalar t) {
  const Scalar v = wrap_angle(theta - t);
  if (v < kSingularTol || v > kTwoPi - kSingularTol)
    throw Error(ErrorKind::SingularPoint, "evaluation point coincides with an eigenangle");
  return v;
}
}  // namespace detail

/// Sum over eigenangles of the principal log(1 - e^{i v}), v = (theta_j - t) mod 2 pi.
///
/// Each factor is 2 sin(v/2) e^{i(v - pi)/2} with sin(v/2) > 0, so the term is
/// log(2 sin(v/2)) + i (v - pi)/2 exactly.
template <typename Scalar>
LogZ log_z(const EigenangleSpectrum<Scalar>& spec, Scalar t) {
  LogZ out;
  for (auto a : spec.angles()) {
    const Scalar v = detail::offset_or_throw(a, t);
    out.re += static_cast<double>(std::log(2 * std::sin(v / 2)));
    out.im += static_cast<double>((v - static_cast<Scalar>(std::numbers::pi)) / 2);
  }
  return out;
}

/// log |Z_U(t)|; -inf at an eigenangle.
template <typename Scalar>
double log_abs_z(const EigenangleSpectrum<Scalar>& spec, Scalar t) {
  double s = 0;
  for (auto a : spec.angles())
    s += static_cast<double>(std::log(std::abs(2 * std::sin((a - t) / 2))));
  return s;
}

/// (N / 2 pi)(t - s) + (Im log Z(t) - Im log Z(s)) / pi, valid for any s < t < s + 2 pi.
template <typename Scalar>
double arc_count_formula(const EigenangleSpectrum<Scalar>& spec, Scalar s, Scalar t) {
  const double n = spec.dim();
  return n / kTwoPi * static_cast<double>(t - s) +
         (log_z(spec, t).im - log_z(spec, s).im) / std::numbers::pi;
}

/// Number of eigenangles in the open arc (s, t), 0 <= s < t < 2 pi, from the
/// imaginary part of log Z. Throws numerical-failure if the formula is not
/// within 1e-6 of an integer.
template <typename Scalar>
int count_in_arc(const EigenangleSpectrum<Scalar>& spec, Scalar s, Scalar t) {
  if (!(s >= 0 && s < t && t < static_cast<Scalar>(kTwoPi)))
    throw Error(ErrorKind::InvalidArgument, "arc must satisfy 0 <= s < t < 2 pi");
  const double value = arc_count_formula(spec, s, t);
  const double rounded = std::round(value);
  if (!(std::abs(value - rounded) <= 1e-6))
    throw Error(ErrorKind::NumericalFailure, "arc formula is not integral: " + std::to_string(value));
  return static_cast<int>(rounded);
}

/// Count in the circular arc (s, t) for arbitrary real s < t < s + 2 pi.
template <typename Scalar>
int count_in_circular_arc(const EigenangleSpectrum<Scalar>& spec, Scalar s, Scalar t) {
  if (!(s < t && t - s < static_cast<Scalar>(kTwoPi)))
    throw Error(ErrorKind::InvalidArgument, "arc length must lie in (0, 2 pi)");
  const double value = arc_count_formula(spec, s, t);
  const double rounded = std::round(value);
  if (!(std::abs(value - rounded) <= 1e-6))
    throw Error(ErrorKind::NumericalFailure, "arc formula is not integral: " + std::to_string(value));
  return static_cast<int>(rounded);
}

/// Brute-force count of angles in the circular arc (s, t).
template <typename Scalar>
int direct_count_in_arc(const EigenangleSpectrum<Scalar>& spec, Scalar s, Scalar t) {
  const Scalar len = t - s;
  int count = 0;
  for (auto a : spec.angles()) {
    const Scalar off = wrap_angle(a - s);
    if (off > 0 && off < len) ++count;
  }
  return count;
}

/// log Z_U(0) = sum_j log(1 - <x_j, e_j>), principal branch per factor.
template <typename Scalar>
LogZ log_z_from_chain(const ReflectionChain<Scalar>& chain) {
  LogZ out;
  for (int j = 1; j <= chain.dim(); ++j) {
    const std::complex<double> w = std::complex<double>(1.0) -
                                   std::complex<double>(chain.last_coordinate(j));
    if (std::abs(w) < 1e-14)
      throw Error(ErrorKind::SingularPoint, "1 is an eigenvalue of the chain matrix");
    const auto l = std::log(w);
    out.re += l.real();
    out.im += l.imag();
  }
  return out;
}

/// S_t^{(K)} = -(1/2) sum_{0 < |k| <= K} e^{-ikt} tr(U^k) / |k|, with tr(U^{-k}) = conj(tr U^k).
template <typename Scalar>
std::complex<double> trace_series_partial(const UnitaryMatrix<Scalar>& u, double t, int kmax) {
  if (kmax < 1) throw Error(ErrorKind::InvalidArgument, "Kmax must be >= 1");
  using Matrix = ComplexMatrix<Scalar>;
  Matrix power = u.matrix();
  std::complex<double> sum = 0;
  for (int k = 1; k <= kmax; ++k) {
    if (k > 1) power = power * u.matrix();
    const std::complex<double> tr(power.trace());
    sum += (std::polar(1.0, -k * t) * tr + std::polar(1.0, k * t) * std::conj(tr)) / double(k);
  }
  return -0.5 * sum;
}

}  // namespace cuelab
