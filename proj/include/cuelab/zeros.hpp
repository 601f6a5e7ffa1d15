#pragma once

#include <complex>
#include <vector>

#include "cuelab/spectrum.hpp"

namespace cuelab {

/// F_N = sum_j b_j Phi_{U_j} for n determinant-one spectra of a common size N.
class CombinationEnsemble {
 public:
  CombinationEnsemble(std::vector<double> coefficients, std::vector<Spectrum> spectra);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(coefficients_.size()); }
  const std::vector<double>& coefficients() const { return coefficients_; }
  const std::vector<Spectrum>& spectra() const { return spectra_; }
  double coefficient(int j) const { return coefficients_[j]; }
  const Spectrum& spectrum(int j) const { return spectra_[j]; }

  /// F_N(z) = sum_j b_j prod_k (1 - z e^{i theta_jk}).
  std::complex<double> evaluate(std::complex<double> z) const;
  /// sum_j |b_j| |Phi_j(z)|: the magnitude against which cancellation is judged.
  double magnitude(std::complex<double> z) const;

 private:
  std::vector<double> coefficients_;
  std::vector<Spectrum> spectra_;
  int dim_ = 0;
};

/// G(theta) = Re sum_j b_j i^N e^{i N theta / 2} Z_{U_j}(theta), computed in
/// complex arithmetic. Throws numerical-failure if the imaginary part exceeds
/// 1e-8 sum_j |b_j||Z_j(theta)| + 1e-10.
double real_rotation(const CombinationEnsemble& ens, double theta);

/// The same quantity in real arithmetic:
/// sum_j b_j (-1)^{m_j} prod_k 2 sin((theta_jk - theta) / 2), sum_k theta_jk = 2 pi m_j.
double real_rotation_product(const CombinationEnsemble& ens, double theta);

/// i^N e^{i N theta / 2} F_N(e^{-i theta}) split into parts, with the scale
/// sum_j |b_j||Z_j(theta)| that the imaginary part is judged against.
struct RotatedSum {
  double real = 0;
  double imag = 0;
  double scale = 0;
};
RotatedSum rotated_sum(const CombinationEnsemble& ens, double theta);

/// Sign changes of G on [theta0, theta0 + 2 pi] (a lower bound for the number
/// of zeros of F_N on the unit circle).
///
/// G is sampled on grid_factor * N equal steps. Between samples where |G| has
/// a local minimum without a sign change, a golden-section search of at most
/// max_refine steps looks for a hidden pair of crossings. If G nearly
/// vanishes at theta0 the window is moved by half a grid step.
int sign_changes(const CombinationEnsemble& ens, int grid_factor = 8, int max_refine = 20,
                 double theta0 = 0.0);

/// Sign changes restricted to [a, b], sampled on `points` equal steps; no refinement.
int sign_changes_on(const CombinationEnsemble& ens, double a, double b, int points);

struct RootSet {
  std::vector<std::complex<double>> roots;
  int effective_degree = 0;

  /// Roots at the origin (partners of the roots lost to a degree drop).
  int zero_roots(double tol = 1e-8) const;
  /// Nonzero roots pair up under z -> 1 / conj(z) within tol (relative to |z|).
  bool is_symmetric(double tol = 1e-6) const;
};

/// All zeros of F_N via the companion matrix of its coefficient vector, with
/// Newton polishing in product form. Oracle scale: N <= 64.
RootSet roots_oracle(const CombinationEnsemble& ens);

/// Number of roots with ||z| - 1| <= tol.
int circle_root_count(const RootSet& roots, double tol = 1e-6);

/// Zeros of F_N inside |z| = radius by the argument principle. Throws
/// ill-conditioned-contour if |F_N| on the contour falls below 1e-12 of its scale.
int winding_inside_count(const CombinationEnsemble& ens, double radius = 0.99, int samples = 0);

/// winding_inside_count, shrinking the radius by 1e-3 on each ill-conditioned attempt.
int winding_inside_count_retry(const CombinationEnsemble& ens, double radius = 0.99,
                               int attempts = 5);

/// Number of zeros on the circle implied by the winding count: N - 2 * inside.
/// Roots lost to a degree drop sit at the origin and are mirrored at infinity.
int winding_circle_count(const CombinationEnsemble& ens, double radius = 0.99);

}  // namespace cuelab
