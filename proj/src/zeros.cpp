#include "cuelab/zeros.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cuelab/errors.hpp"

namespace cuelab {

namespace {

constexpr double kPi = std::numbers::pi;

// Number of whole turns in the angle sum of a determinant-one spectrum.
long turns(const Spectrum& spec) {
  double sum = 0;
  for (double a : spec.angles()) sum += a;
  return std::lround(sum / kTwoPi);
}

int sign_of(double x) { return (x > 0) - (x < 0); }

// Count alternations in a sequence, skipping exact zeros.
int count_alternations(const std::vector<double>& values, std::size_t first, std::size_t last) {
  int count = 0;
  int previous = 0;
  for (std::size_t i = first; i <= last; ++i) {
    const int s = sign_of(values[i]);
    if (s == 0) continue;
    if (previous != 0 && s != previous) ++count;
    previous = s;
  }
  return count;
}

// Golden-section search for a point in [a, b] where sign * G < 0.
bool hidden_crossing(const CombinationEnsemble& ens, double a, double b, int sign, int steps) {
  const double ratio = (std::sqrt(5.0) - 1) / 2;
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double fc = sign * real_rotation_product(ens, c);
  double fd = sign * real_rotation_product(ens, d);
  if (fc < 0 || fd < 0) return true;
  for (int it = 0; it < steps; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = sign * real_rotation_product(ens, c);
      if (fc < 0) return true;
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = sign * real_rotation_product(ens, d);
      if (fd < 0) return true;
    }
  }
  return false;
}

// Phi_j(z) and its derivative by forward accumulation over the factors.
void phi_and_derivative(const Spectrum& spec, std::complex<double> z, std::complex<double>& p,
                        std::complex<double>& dp) {
  p = 1;
  dp = 0;
  for (double a : spec.angles()) {
    const std::complex<double> w = std::polar(1.0, a);
    dp = dp * (1.0 - z * w) - w * p;
    p *= 1.0 - z * w;
  }
}

double evaluation_scale(const CombinationEnsemble& ens, std::complex<double> z) {
  double sum_b = 0;
  for (double b : ens.coefficients()) sum_b += std::abs(b);
  return sum_b * std::pow(1.0 + std::abs(z), ens.dim());
}

}  // namespace

CombinationEnsemble::CombinationEnsemble(std::vector<double> coefficients,
                                         std::vector<Spectrum> spectra)
    : coefficients_(std::move(coefficients)), spectra_(std::move(spectra)) {
  if (coefficients_.empty())
    throw Error(ErrorKind::InvalidEnsemble, "a combination needs at least one term");
  if (coefficients_.size() != spectra_.size())
    throw Error(ErrorKind::InvalidEnsemble, "one coefficient per spectrum is required");
  dim_ = spectra_.front().dim();
  if (dim_ < 1) throw Error(ErrorKind::InvalidDimension, "spectra must be non-empty");
  for (std::size_t j = 0; j < spectra_.size(); ++j) {
    if (coefficients_[j] == 0 || !std::isfinite(coefficients_[j]))
      throw Error(ErrorKind::InvalidEnsemble, "coefficients must be finite and nonzero");
    if (spectra_[j].dim() != dim_)
      throw Error(ErrorKind::InvalidEnsemble, "all spectra must have the same size");
    if (circular_distance(spectra_[j].det_phase(), 0.0) > 1e-6)
      throw Error(ErrorKind::InvalidEnsemble,
                  "spectrum " + std::to_string(j) + " does not have determinant one");
  }
}

std::complex<double> CombinationEnsemble::evaluate(std::complex<double> z) const {
  std::complex<double> sum = 0;
  for (int j = 0; j < size(); ++j) {
    std::complex<double> p = 1;
    for (double a : spectra_[j].angles()) p *= 1.0 - z * std::polar(1.0, a);
    sum += coefficients_[j] * p;
  }
  return sum;
}

double CombinationEnsemble::magnitude(std::complex<double> z) const {
  double sum = 0;
  for (int j = 0; j < size(); ++j) {
    double p = std::abs(coefficients_[j]);
    for (double a : spectra_[j].angles()) p *= std::abs(1.0 - z * std::polar(1.0, a));
    sum += p;
  }
  return sum;
}

RotatedSum rotated_sum(const CombinationEnsemble& ens, double theta) {
  const int n = ens.dim();
  const std::complex<double> rotation = std::polar(1.0, n * (kPi + theta) / 2);
  std::complex<double> sum = 0;
  double scale = 0;
  for (int j = 0; j < ens.size(); ++j) {
    const std::complex<double> z = z_value(ens.spectrum(j), theta);
    sum += ens.coefficient(j) * z;
    scale += std::abs(ens.coefficient(j)) * std::abs(z);
  }
  sum *= rotation;
  return {sum.real(), sum.imag(), scale};
}

double real_rotation(const CombinationEnsemble& ens, double theta) {
  const RotatedSum r = rotated_sum(ens, theta);
  if (!(std::abs(r.imag) <= 1e-8 * r.scale + 1e-10))
    throw Error(ErrorKind::NumericalFailure,
                "rotated combination is not real: residual " + std::to_string(r.imag));
  return r.real;
}

double real_rotation_product(const CombinationEnsemble& ens, double theta) {
  double sum = 0;
  for (int j = 0; j < ens.size(); ++j) {
    const Spectrum& spec = ens.spectrum(j);
    double p = turns(spec) % 2 ? -ens.coefficient(j) : ens.coefficient(j);
    for (double a : spec.angles()) p *= 2 * std::sin((a - theta) / 2);
    sum += p;
  }
  return sum;
}

int sign_changes(const CombinationEnsemble& ens, int grid_factor, int max_refine, double theta0) {
  if (grid_factor < 1) throw Error(ErrorKind::InvalidArgument, "grid factor must be positive");
  if (max_refine < 0) throw Error(ErrorKind::InvalidArgument, "refinement depth must be >= 0");
  const int m = grid_factor * ens.dim();
  const double step = kTwoPi / m;
  // A zero on the window edge produces no alternation; slide the window off it.
  for (int attempt = 0; attempt < 8; ++attempt) {
    const RotatedSum edge = rotated_sum(ens, theta0);
    if (std::abs(edge.real) > 1e-9 * edge.scale) break;
    theta0 += step / 2;
  }
  // values[i + 1] = G(theta0 + i step) for i = -1 .. m + 1
  std::vector<double> values(m + 3);
  double peak = 0;
  double scale = 0;
  for (int i = -1; i <= m + 1; ++i) {
    const double theta = theta0 + i * step;
    values[i + 1] = real_rotation_product(ens, theta);
    peak = std::max(peak, std::abs(values[i + 1]));
    scale = std::max(scale, ens.magnitude(std::polar(1.0, -theta)));
  }
  if (!(peak > 1e-12 * scale))
    throw Error(ErrorKind::DegenerateCombination, "G vanishes on the whole grid");

  int count = count_alternations(values, 1, m + 1);
  if (max_refine == 0) return count;
  for (int i = 0; i < m; ++i) {
    const double left = values[i], mid = values[i + 1], right = values[i + 2];
    const int s = sign_of(mid);
    if (s == 0 || sign_of(left) != s || sign_of(right) != s) continue;
    if (!(std::abs(mid) < std::abs(left) && std::abs(mid) <= std::abs(right))) continue;
    const double theta = theta0 + i * step;
    if (hidden_crossing(ens, theta - step, theta + step, s, max_refine)) count += 2;
  }
  return count;
}

int sign_changes_on(const CombinationEnsemble& ens, double a, double b, int points) {
  if (points < 1 || !(a < b)) throw Error(ErrorKind::InvalidArgument, "bad sampling interval");
  std::vector<double> values(points + 1);
  for (int i = 0; i <= points; ++i) values[i] = real_rotation_product(ens, a + (b - a) * i / points);
  return count_alternations(values, 0, points);
}

int RootSet::zero_roots(double tol) const {
  return static_cast<int>(
      std::count_if(roots.begin(), roots.end(), [&](auto z) { return std::abs(z) <= tol; }));
}

bool RootSet::is_symmetric(double tol) const {
  std::vector<std::complex<double>> nonzero;
  for (auto z : roots)
    if (std::abs(z) > 1e-8) nonzero.push_back(z);
  std::vector<bool> used(nonzero.size(), false);
  for (std::size_t i = 0; i < nonzero.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    const std::complex<double> target = 1.0 / std::conj(nonzero[i]);
    const double allowed = tol * std::max(1.0, std::abs(target));
    if (std::abs(target - nonzero[i]) <= allowed) continue;
    std::size_t best = nonzero.size();
    double best_distance = allowed;
    for (std::size_t j = 0; j < nonzero.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(nonzero[j] - target);
      if (d <= best_distance) {
        best_distance = d;
        best = j;
      }
    }
    if (best == nonzero.size()) return false;
    used[best] = true;
  }
  return true;
}

RootSet roots_oracle(const CombinationEnsemble& ens) {
  const int n = ens.dim();
  if (n > 64) throw Error(ErrorKind::InvalidDimension, "the root oracle is limited to N <= 64");
  std::vector<std::complex<double>> coeffs(n + 1, 0.0);
  double reference = 0;
  for (int j = 0; j < ens.size(); ++j) {
    std::vector<std::complex<double>> p(n + 1, 0.0);
    p[0] = 1;
    int degree = 0;
    for (double a : ens.spectrum(j).angles()) {
      const std::complex<double> w = std::polar(1.0, a);
      ++degree;
      for (int k = degree; k >= 1; --k) p[k] -= w * p[k - 1];
    }
    double peak = 0;
    for (int k = 0; k <= n; ++k) {
      coeffs[k] += ens.coefficient(j) * p[k];
      peak = std::max(peak, std::abs(p[k]));
    }
    reference += std::abs(ens.coefficient(j)) * peak;
  }
  const double trim = 1e-10 * reference;
  int top = n;
  while (top >= 0 && std::abs(coeffs[top]) <= trim) --top;
  if (top < 0) throw Error(ErrorKind::DegenerateCombination, "all coefficients cancel");
  int low = 0;
  while (std::abs(coeffs[low]) <= trim) ++low;

  RootSet out;
  out.effective_degree = top;
  out.roots.assign(low, 0.0);
  const int degree = top - low;
  if (degree == 0) return out;

  using Matrix = Eigen::MatrixXcd;
  Matrix companion = Matrix::Zero(degree, degree);
  for (int k = 1; k < degree; ++k) companion(k, k - 1) = 1;
  for (int k = 0; k < degree; ++k) companion(k, degree - 1) = -coeffs[low + k] / coeffs[top];
  Eigen::ComplexEigenSolver<Matrix> solver(companion, false);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::NumericalFailure, "companion eigenvalues did not converge");

  for (int k = 0; k < degree; ++k) {
    std::complex<double> z = solver.eigenvalues()(k);
    double residual = std::abs(ens.evaluate(z));
    for (int it = 0; it < 8; ++it) {
      std::complex<double> f = 0, df = 0;
      for (int j = 0; j < ens.size(); ++j) {
        std::complex<double> p, dp;
        phi_and_derivative(ens.spectrum(j), z, p, dp);
        f += ens.coefficient(j) * p;
        df += ens.coefficient(j) * dp;
      }
      if (df == 0.0) break;
      const std::complex<double> next = z - f / df;
      const double next_residual = std::abs(ens.evaluate(next));
      if (!(next_residual < residual)) break;
      const double moved = std::abs(next - z);
      z = next;
      residual = next_residual;
      if (moved <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    if (!(residual <= 1e-6 * evaluation_scale(ens, z)))
      throw Error(ErrorKind::NumericalFailure, "root residual " + std::to_string(residual));
    out.roots.push_back(z);
  }
  return out;
}

int circle_root_count(const RootSet& roots, double tol) {
  if (!(tol > 0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  return static_cast<int>(std::count_if(roots.roots.begin(), roots.roots.end(), [&](auto z) {
    return std::abs(std::abs(z) - 1.0) <= tol;
  }));
}

int winding_inside_count(const CombinationEnsemble& ens, double radius, int samples) {
  if (!(radius > 0 && radius < 1))
    throw Error(ErrorKind::InvalidArgument, "contour radius must lie in (0, 1)");
  const int minimum = 64 * ens.dim();
  if (samples == 0) samples = minimum;
  if (samples < minimum) throw Error(ErrorKind::InvalidArgument, "need at least 64 N contour samples");

  for (int attempt = 0; attempt < 5; ++attempt, samples *= 2) {
    double total = 0;
    double worst_step = 0;
    std::complex<double> previous = ens.evaluate(radius);
    for (int k = 1; k <= samples; ++k) {
      const std::complex<double> z = std::polar(radius, kTwoPi * k / samples);
      const std::complex<double> f = k == samples ? ens.evaluate(radius) : ens.evaluate(z);
      if (!(std::abs(f) > 1e-12 * ens.magnitude(z)))
        throw Error(ErrorKind::IllConditionedContour, "F_N nearly vanishes on the contour");
      const double step = std::arg(f / previous);
      worst_step = std::max(worst_step, std::abs(step));
      total += step;
      previous = f;
    }
    if (worst_step <= kPi / 2) return static_cast<int>(std::lround(total / kTwoPi));
  }
  throw Error(ErrorKind::IllConditionedContour, "argument steps stay too large on the contour");
}

int winding_inside_count_retry(const CombinationEnsemble& ens, double radius, int attempts) {
  for (int a = 0;; ++a) {
    try {
      return winding_inside_count(ens, radius - 1e-3 * a);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::IllConditionedContour || a + 1 >= attempts) throw;
    }
  }
}

int winding_circle_count(const CombinationEnsemble& ens, double radius) {
  return ens.dim() - 2 * winding_inside_count_retry(ens, radius);
}

}  // namespace cuelab
