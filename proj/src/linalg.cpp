#include "weakmeas/linalg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "weakmeas/errors.hpp"

namespace wm {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_mix(std::uint64_t& h, std::uint64_t word) {
  for (int i = 0; i < 8; ++i) {
    h ^= (word >> (8 * i)) & 0xffU;
    h *= kFnvPrime;
  }
}

template <typename Derived>
Fingerprint hash_entries(const Eigen::MatrixBase<Derived>& m) {
  std::uint64_t h = kFnvOffset;
  fnv_mix(h, static_cast<std::uint64_t>(m.rows()));
  fnv_mix(h, static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      fnv_mix(h, std::bit_cast<std::uint64_t>(m(i, j).real()));
      fnv_mix(h, std::bit_cast<std::uint64_t>(m(i, j).imag()));
    }
  }
  return h;
}

std::vector<EigenGroup> group_eigenvalues(const RealVector& values, double norm,
                                          const Tolerances& tol) {
  std::vector<EigenGroup> groups;
  const double gap = tol.degeneracy * std::max(1.0, norm);
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (groups.empty() || values[i] - values[groups.back().columns.back()] > gap) {
      groups.push_back({values[i], {i}});
    } else {
      groups.back().columns.push_back(i);
    }
  }
  for (auto& g : groups) {
    double sum = 0.0;
    for (auto c : g.columns) sum += values[c];
    g.value = sum / static_cast<double>(g.columns.size());
  }
  return groups;
}

}  // namespace

Fingerprint fingerprint(const Vector& v) { return hash_entries(v); }
Fingerprint fingerprint(const Matrix& m) { return hash_entries(m); }

Fingerprint combine(Fingerprint a, Fingerprint b) {
  std::uint64_t h = kFnvOffset;
  fnv_mix(h, a);
  fnv_mix(h, b);
  return h;
}

bool all_finite(const Vector& v) {
  return std::all_of(v.begin(), v.end(),
                     [](Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

bool all_finite(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

double hermiticity_defect(const Matrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

StateVector::StateVector(Vector amplitudes, double tolerance) : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw Error(ErrorKind::invalid_dimension, "state vector of dimension 0");
  if (!all_finite(amplitudes_)) throw Error(ErrorKind::invalid_parameter, "state vector has non-finite entries");
  const double defect = std::abs(amplitudes_.norm() - 1.0);
  if (defect > tolerance) {
    throw Error(ErrorKind::contract_violation,
                "state vector not normalized (| |v| - 1 | = " + std::to_string(defect) + ")");
  }
}

StateVector StateVector::normalized(const Vector& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n))
    throw Error(ErrorKind::invalid_parameter, "cannot normalize a zero or non-finite vector");
  return StateVector(v / n);
}

StateVector StateVector::basis(Eigen::Index dim, Eigen::Index index) {
  if (dim < 1) throw Error(ErrorKind::invalid_dimension, "basis vector of dimension 0");
  if (index < 0 || index >= dim) throw Error(ErrorKind::invalid_parameter, "basis index out of range");
  Vector v = Vector::Zero(dim);
  v[index] = 1.0;
  return StateVector(std::move(v));
}

OrthogonalComponent orthogonal_component(const StateVector& anchor, const Vector& v) {
  if (anchor.dim() != v.size()) throw Error(ErrorKind::shape, "orthogonal_component: dimension mismatch");
  const Vector& a = anchor.vec();
  Vector c = v - braket(a, v) * a;
  // A second Gram-Schmidt pass removes the residual overlap left by cancellation.
  c -= braket(a, c) * a;
  const double n = c.norm();
  return {std::move(c), n};
}

void fix_phases(Matrix& columns) {
  for (Eigen::Index j = 0; j < columns.cols(); ++j) {
    Eigen::Index best = 0;
    columns.col(j).cwiseAbs().maxCoeff(&best);
    const Complex pivot = columns(best, j);
    if (std::abs(pivot) == 0.0) continue;
    columns.col(j) *= std::conj(pivot) / std::abs(pivot);
    columns(best, j) = std::abs(columns(best, j));
  }
}

Matrix SpectralDecomposition::projector(const EigenGroup& group) const {
  const Eigen::Index n = eigenvectors.rows();
  Matrix p = Matrix::Zero(n, n);
  for (auto c : group.columns) p.noalias() += eigenvectors.col(c) * eigenvectors.col(c).adjoint();
  return p;
}

Matrix SpectralDecomposition::reconstruct() const {
  return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

double SpectralDecomposition::operator_norm() const {
  return eigenvalues.size() == 0 ? 0.0 : eigenvalues.cwiseAbs().maxCoeff();
}

SpectralDecomposition eigendecompose_hermitian(const Matrix& h, const Tolerances& tol) {
  if (h.rows() == 0 || h.rows() != h.cols())
    throw Error(ErrorKind::shape, "eigendecompose_hermitian: matrix must be square and non-empty");
  if (!all_finite(h)) throw Error(ErrorKind::invalid_parameter, "eigendecompose_hermitian: non-finite entries");
  const double defect = hermiticity_defect(h);
  if (defect > tol.construction)
    throw Error(ErrorKind::contract_violation,
                "eigendecompose_hermitian: matrix is not Hermitian (defect " + std::to_string(defect) + ")");

  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::contract_violation, "eigendecompose_hermitian: solver did not converge");
  return spectral_from_basis(solver.eigenvalues(), solver.eigenvectors(), tol);
}

SpectralDecomposition spectral_from_basis(RealVector eigenvalues, Matrix eigenvectors,
                                          const Tolerances& tol) {
  if (eigenvectors.rows() != eigenvectors.cols() || eigenvectors.cols() != eigenvalues.size())
    throw Error(ErrorKind::shape, "spectral_from_basis: inconsistent shapes");
  for (Eigen::Index i = 1; i < eigenvalues.size(); ++i)
    if (eigenvalues[i] < eigenvalues[i - 1])
      throw Error(ErrorKind::contract_violation, "spectral_from_basis: eigenvalues must be ascending");
  SpectralDecomposition s;
  s.eigenvalues = std::move(eigenvalues);
  s.eigenvectors = std::move(eigenvectors);
  fix_phases(s.eigenvectors);
  s.groups = group_eigenvalues(s.eigenvalues, s.operator_norm(), tol);
  return s;
}

}  // namespace wm
