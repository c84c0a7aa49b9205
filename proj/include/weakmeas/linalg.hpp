#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "weakmeas/tolerances.hpp"

namespace wm {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// 64-bit content hash of a vector or matrix (FNV-1a over shape and the raw
/// IEEE bits of every entry). Used to attribute reports to their inputs.
using Fingerprint = std::uint64_t;

Fingerprint fingerprint(const Vector& v);
Fingerprint fingerprint(const Matrix& m);
Fingerprint combine(Fingerprint a, Fingerprint b);

bool all_finite(const Vector& v);
bool all_finite(const Matrix& m);

/// Largest entrywise |M - M^dagger|.
double hermiticity_defect(const Matrix& m);

/// <a|b> with the conjugate on the left argument.
inline Complex braket(const Vector& a, const Vector& b) { return a.dot(b); }

/// <a|M|b>.
inline Complex braket(const Vector& a, const Matrix& m, const Vector& b) { return a.dot(m * b); }

/// A normalized, finite amplitude vector. Construction checks the invariant;
/// use normalized() to rescale an arbitrary nonzero vector.
class StateVector {
 public:
  explicit StateVector(Vector amplitudes, double tolerance = kDefaultTolerances.construction);

  static StateVector normalized(const Vector& v);
  static StateVector basis(Eigen::Index dim, Eigen::Index index);

  const Vector& vec() const noexcept { return amplitudes_; }
  Eigen::Index dim() const noexcept { return amplitudes_.size(); }
  Complex operator[](Eigen::Index i) const { return amplitudes_[i]; }
  Fingerprint fingerprint() const { return wm::fingerprint(amplitudes_); }

 private:
  Vector amplitudes_;
};

/// v minus its projection on a normalized anchor, returned with its norm.
struct OrthogonalComponent {
  Vector component;
  double norm = 0.0;
};

OrthogonalComponent orthogonal_component(const StateVector& anchor, const Vector& v);

/// Eigenvalues that agree within the degeneracy tolerance share one
/// spectral projector; a group lists the column indices belonging to it.
struct EigenGroup {
  double value = 0.0;
  std::vector<Eigen::Index> columns;
};

struct SpectralDecomposition {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // orthonormal columns, largest-modulus entry real positive
  std::vector<EigenGroup> groups;

  /// Projector onto the span of one group's eigenvectors.
  Matrix projector(const EigenGroup& group) const;
  Matrix reconstruct() const;
  double operator_norm() const;
};

SpectralDecomposition eigendecompose_hermitian(const Matrix& h,
                                               const Tolerances& tol = kDefaultTolerances);

/// Assembles a decomposition from an already known orthonormal eigenbasis
/// (ascending eigenvalues) and groups it with the same rule as the solver.
SpectralDecomposition spectral_from_basis(RealVector eigenvalues, Matrix eigenvectors,
                                          const Tolerances& tol = kDefaultTolerances);

/// Rotates each column so that its largest-modulus entry is real positive.
void fix_phases(Matrix& columns);

}  // namespace wm
