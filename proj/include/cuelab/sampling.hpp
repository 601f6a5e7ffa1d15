#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <algorithm>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "cuelab/errors.hpp"
#include "cuelab/rng.hpp"

namespace cuelab {

template <typename Scalar>
using ComplexMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

/// max(base, 100 eps): the double tolerances, widened for less precise scalars.
template <typename Scalar>
constexpr double scalar_tolerance(double base) {
  return std::max(base, 100.0 * static_cast<double>(std::numeric_limits<Scalar>::epsilon()));
}

/// Dense N x N matrix whose unitarity has been checked on construction.
///
/// Invariants: max |(U^H U - I)_{ij}| <= 1e-10 N and ||det U| - 1| <= 1e-8
/// (for double; see scalar_tolerance).
template <typename Scalar = double>
class UnitaryMatrix {
 public:
  using Complex = std::complex<Scalar>;
  using Matrix = ComplexMatrix<Scalar>;

  explicit UnitaryMatrix(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() == 0 || entries_.rows() != entries_.cols())
      throw Error(ErrorKind::InvalidDimension, "unitary matrix must be square and non-empty");
    const double defect = unitarity_defect(entries_);
    const double tol = scalar_tolerance<Scalar>(1e-10) * dim();
    if (!(defect <= tol))
      throw Error(ErrorKind::NumericalFailure,
                  "unitarity defect " + std::to_string(defect) + " exceeds " + std::to_string(tol));
    const double det_modulus = static_cast<double>(std::abs(determinant()));
    if (!(std::abs(det_modulus - 1.0) <= std::max(1e-8, scalar_tolerance<Scalar>(0) * dim())))
      throw Error(ErrorKind::NumericalFailure, "|det U| = " + std::to_string(det_modulus));
  }

  static double unitarity_defect(const Matrix& m) {
    const Matrix gram = m.adjoint() * m;
    return static_cast<double>((gram - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff());
  }

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& matrix() const { return entries_; }
  Complex operator()(int i, int j) const { return entries_(i, j); }

  Complex determinant() const { return entries_.partialPivLu().determinant(); }
  Complex trace() const { return entries_.trace(); }

  UnitaryMatrix adjoint() const { return UnitaryMatrix(entries_.adjoint(), Unchecked{}); }

  /// tr(U^p) for any integer p, by repeated multiplication (U^{-1} = U^H).
  Complex trace_power(int p) const {
    if (p == 0) return Complex(static_cast<Scalar>(dim()), 0);
    const Matrix base = p > 0 ? entries_ : Matrix(entries_.adjoint());
    int e = p > 0 ? p : -p;
    Matrix result = Matrix::Identity(dim(), dim());
    Matrix sq = base;
    while (e > 0) {
      if (e & 1) result = result * sq;
      e >>= 1;
      if (e > 0) sq = sq * sq;
    }
    return result.trace();
  }

 private:
  struct Unchecked {};
  UnitaryMatrix(Matrix entries, Unchecked) : entries_(std::move(entries)) {}

  Matrix entries_;
};

/// Unit vectors x_1, ..., x_N with x_j in C^j. x_1 is a unit-modulus scalar.
template <typename Scalar = double>
struct ReflectionChain {
  using Complex = std::complex<Scalar>;
  std::vector<ComplexVector<Scalar>> vectors;

  int dim() const { return static_cast<int>(vectors.size()); }

  /// <x_j, e_j>: the last coordinate of x_j (j is 1-based).
  Complex last_coordinate(int j) const { return vectors.at(j - 1)(j - 1); }

  bool is_normalized(double tol = 1e-12) const {
    for (const auto& x : vectors)
      if (!(std::abs(static_cast<double>(x.norm()) - 1.0) <= tol)) return false;
    return true;
  }
};

/// Uniform point on the unit sphere of C^j (normalized standard complex Gaussian).
template <typename Scalar = double>
ComplexVector<Scalar> sample_unit_sphere(int j, RngStream& rng) {
  if (j < 1) throw Error(ErrorKind::InvalidDimension, "sphere dimension must be >= 1");
  ComplexVector<Scalar> x(j);
  Scalar norm2 = 0;
  do {
    for (int i = 0; i < j; ++i) x(i) = rng.complex_normal<Scalar>();
    norm2 = x.squaredNorm();
  } while (norm2 == Scalar(0));
  x /= std::sqrt(norm2);
  return x;
}

/// Eigenvalue lambda of the complex reflection R(x) on span(e_j - x); also det R(x).
///
/// R(x) = I - (1 - lambda) u u^H with u = (e_j - x)/|e_j - x| and
/// lambda = -(1 - x_j) / conj(1 - x_j). For x = e_j the reflection is the identity.
template <typename Scalar>
std::complex<Scalar> reflection_eigenvalue(const ComplexVector<Scalar>& x) {
  using Complex = std::complex<Scalar>;
  const Complex w = Scalar(1) - x(x.size() - 1);
  if (std::abs(w) == Scalar(0)) return Complex(1);
  return -w / std::conj(w);
}

template <typename Scalar>
std::complex<Scalar> reflection_determinant(const ComplexVector<Scalar>& x) {
  return reflection_eigenvalue(x);
}

namespace detail {

template <typename Scalar>
void check_unit(const ComplexVector<Scalar>& x) {
  if (x.size() < 1) throw Error(ErrorKind::InvalidDimension, "empty reflection vector");
  const double n = static_cast<double>(x.norm());
  if (!(std::abs(n - 1.0) <= scalar_tolerance<Scalar>(1e-10)))
    throw Error(ErrorKind::InvalidArgument, "reflection vector has norm " + std::to_string(n));
}

// Rank-one data (u, 1 - lambda) of R(x); returns false when R(x) = I.
template <typename Scalar>
bool reflection_update(const ComplexVector<Scalar>& x, ComplexVector<Scalar>& u,
                       std::complex<Scalar>& one_minus_lambda) {
  const int j = static_cast<int>(x.size());
  u = -x;
  u(j - 1) += Scalar(1);
  const Scalar vnorm2 = u.squaredNorm();
  if (vnorm2 == Scalar(0)) return false;
  one_minus_lambda = vnorm2 / std::conj(u(j - 1));
  u /= std::sqrt(vnorm2);
  return true;
}

}  // namespace detail

/// The unique unitary in U(j) with R e_j = x and image(I - R) = span(e_j - x).
template <typename Scalar>
UnitaryMatrix<Scalar> reflection_matrix(const ComplexVector<Scalar>& x) {
  detail::check_unit(x);
  const int j = static_cast<int>(x.size());
  ComplexMatrix<Scalar> r = ComplexMatrix<Scalar>::Identity(j, j);
  ComplexVector<Scalar> u;
  std::complex<Scalar> c;
  if (detail::reflection_update(x, u, c)) r.noalias() -= c * (u * u.adjoint());
  return UnitaryMatrix<Scalar>(std::move(r));
}

/// U = R(x_N) diag(R(x_{N-1}), 1) ... diag(R(x_1), I_{N-1}).
template <typename Scalar>
UnitaryMatrix<Scalar> assemble(const ReflectionChain<Scalar>& chain) {
  const int n = chain.dim();
  if (n < 1) throw Error(ErrorKind::InvalidDimension, "empty reflection chain");
  ComplexMatrix<Scalar> m = ComplexMatrix<Scalar>::Identity(n, n);
  ComplexVector<Scalar> u;
  std::complex<Scalar> c;
  // Left-multiply by diag(R(x_j), I) for j = 1..N; before step j only the
  // leading (j-1) x (j-1) block differs from the identity.
  for (int j = 1; j <= n; ++j) {
    const auto& x = chain.vectors[j - 1];
    detail::check_unit(x);
    if (!detail::reflection_update(x, u, c)) continue;
    auto block = m.topLeftCorner(j, j);
    const Eigen::Matrix<std::complex<Scalar>, 1, Eigen::Dynamic> row = u.adjoint() * block;
    block.noalias() -= c * (u * row);
  }
  return UnitaryMatrix<Scalar>(std::move(m));
}

/// Independent uniform x_1..x_N; drawn in order j = 1..N.
template <typename Scalar = double>
ReflectionChain<Scalar> sample_reflection_chain(int n, RngStream& rng) {
  if (n < 1) throw Error(ErrorKind::InvalidDimension, "matrix dimension must be >= 1");
  ReflectionChain<Scalar> chain;
  chain.vectors.reserve(n);
  for (int j = 1; j <= n; ++j) chain.vectors.push_back(sample_unit_sphere<Scalar>(j, rng));
  return chain;
}

/// Replace x_1 so that det U = e^{i N theta}: x_1 = e^{i N theta} prod_{j>=2} det R(x_j)^{-1}.
template <typename Scalar>
void force_determinant(ReflectionChain<Scalar>& chain, double theta) {
  using Complex = std::complex<Scalar>;
  const int n = chain.dim();
  const double phase = std::remainder(static_cast<double>(n) * theta, 2.0 * std::numbers::pi);
  Complex x1 = std::polar(Scalar(1), static_cast<Scalar>(phase));
  for (int j = 2; j <= n; ++j) x1 /= reflection_determinant(chain.vectors[j - 1]);
  x1 /= std::abs(x1);
  chain.vectors[0](0) = x1;
}

template <typename Scalar = double>
ReflectionChain<Scalar> sample_special_chain(int n, double theta, RngStream& rng) {
  auto chain = sample_reflection_chain<Scalar>(n, rng);
  force_determinant(chain, theta);
  return chain;
}

template <typename Scalar = double>
struct HaarSample {
  UnitaryMatrix<Scalar> matrix;
  ReflectionChain<Scalar> chain;
};

/// Haar-distributed U(N) matrix via the reflection decomposition.
template <typename Scalar = double>
HaarSample<Scalar> haar_unitary(int n, RngStream& rng) {
  auto chain = sample_reflection_chain<Scalar>(n, rng);
  auto u = assemble(chain);
  return {std::move(u), std::move(chain)};
}

/// Sample of P_{SU(N),theta}: Haar on SU(N) rotated by e^{i theta}; det U = e^{i N theta}.
///
/// Consumes the stream exactly like haar_unitary, so both calls on equal
/// streams share x_2..x_N.
template <typename Scalar = double>
HaarSample<Scalar> haar_special_unitary(int n, double theta, RngStream& rng) {
  auto chain = sample_special_chain<Scalar>(n, theta, rng);
  auto u = assemble(chain);
  return {std::move(u), std::move(chain)};
}

template <typename Scalar = double>
struct CoupledPair {
  HaarSample<Scalar> special;  // law P_{SU(N),theta}
  HaarSample<Scalar> unitary;  // law P_{U(N)}, same x_2..x_N
};

template <typename Scalar = double>
CoupledPair<Scalar> coupled_pair(int n, double theta, RngStream& rng) {
  if (n < 2) throw Error(ErrorKind::InvalidDimension, "coupling needs N >= 2");
  auto free_chain = sample_reflection_chain<Scalar>(n, rng);
  auto forced_chain = free_chain;
  force_determinant(forced_chain, theta);
  auto u = assemble(forced_chain);
  auto u_prime = assemble(free_chain);
  return {{std::move(u), std::move(forced_chain)}, {std::move(u_prime), std::move(free_chain)}};
}

/// Independent Haar sampler: QR of a complex Ginibre matrix with the phases of
/// diag(R) moved into Q.
template <typename Scalar = double>
UnitaryMatrix<Scalar> haar_unitary_qr_oracle(int n, RngStream& rng) {
  if (n < 1) throw Error(ErrorKind::InvalidDimension, "matrix dimension must be >= 1");
  ComplexMatrix<Scalar> g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = rng.complex_normal<Scalar>();
  Eigen::HouseholderQR<ComplexMatrix<Scalar>> qr(g);
  ComplexMatrix<Scalar> q = qr.householderQ();
  const auto& r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const auto d = r(j, j);
    const Scalar a = std::abs(d);
    if (a > Scalar(0)) q.col(j) *= d / a;
  }
  return UnitaryMatrix<Scalar>(std::move(q));
}

}  // namespace cuelab
