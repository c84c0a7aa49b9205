#include "weakmeas/quantum_model.hpp"

#include <cmath>
#include <string>

#include "weakmeas/errors.hpp"

namespace wm {

Observable::Observable(Matrix matrix, const Tolerances& tol)
    : Observable(matrix, eigendecompose_hermitian(matrix, tol)) {}

Observable::Observable(Matrix matrix, SpectralDecomposition spectrum)
    : matrix_(std::move(matrix)), spectrum_(std::move(spectrum)), fingerprint_(wm::fingerprint(matrix_)) {}

Observable Observable::from_spectrum(RealVector eigenvalues, Matrix eigenvectors, const Tolerances& tol) {
  SpectralDecomposition s = spectral_from_basis(std::move(eigenvalues), std::move(eigenvectors), tol);
  Matrix m = s.reconstruct();
  m = 0.5 * (m + m.adjoint()).eval();
  return Observable(std::move(m), std::move(s));
}

std::vector<Observable::SpectralProjector> Observable::projectors() const {
  std::vector<SpectralProjector> out;
  out.reserve(spectrum_.groups.size());
  for (const auto& g : spectrum_.groups) out.push_back({g.value, spectrum_.projector(g)});
  return out;
}

Vector Observable::apply_exponential(Complex theta, const Vector& v) const {
  if (v.size() != dim()) throw Error(ErrorKind::shape, "apply_exponential: dimension mismatch");
  const Matrix& u = spectrum_.eigenvectors;
  Vector coeffs = u.adjoint() * v;
  for (Eigen::Index i = 0; i < coeffs.size(); ++i)
    coeffs[i] *= std::exp(-kI * theta * spectrum_.eigenvalues[i]);
  return u * coeffs;
}

PPSEnsemble::PPSEnsemble(StateVector pre, StateVector post, const Tolerances& tol)
    : pre_(std::move(pre)), post_(std::move(post)) {
  if (pre_.dim() != post_.dim()) throw Error(ErrorKind::shape, "PPSEnsemble: pre/post dimension mismatch");
  overlap_ = braket(post_.vec(), pre_.vec());
  k_ = std::norm(overlap_);
  if (!(k_ > tol.overlap))
    throw Error(ErrorKind::orthogonal_postselection,
                "PPSEnsemble: |<phi|psi>|^2 = " + std::to_string(k_) + " at or below threshold");
}

WeakValue weak_value(const PPSEnsemble& ens, const Observable& a) {
  if (a.dim() != ens.dim()) throw Error(ErrorKind::shape, "weak_value: dimension mismatch");
  if (ens.overlap() == Complex{0.0, 0.0})
    throw Error(ErrorKind::orthogonal_postselection, "weak_value: vanishing overlap");
  const Complex num = braket(ens.post().vec(), a.matrix(), ens.pre().vec());
  return {num / ens.overlap(), ens.fingerprint(), a.fingerprint()};
}

WeakOperator weak_operator(const PPSEnsemble& ens, const Observable& a) {
  if (a.dim() != ens.dim()) throw Error(ErrorKind::shape, "weak_operator: dimension mismatch");
  const Vector& phi = ens.post().vec();
  // |phi>(<phi|A) / k
  const Eigen::RowVectorXcd bra = phi.adjoint() * a.matrix();
  Matrix m = (phi * bra) / ens.overlap_k();
  return {std::move(m), ens, a};
}

Matrix adjoint_weak_operator(const WeakOperator& w) { return w.matrix.adjoint(); }

WeakOperatorResiduals weak_operator_residuals(const WeakOperator& w) {
  const Vector& psi = w.ensemble.pre().vec();
  const Vector& phi = w.ensemble.post().vec();
  const double k = w.ensemble.overlap_k();
  const Complex wv = weak_value(w.ensemble, w.parent).value;

  WeakOperatorResiduals r{};
  r.mean_relative = std::abs(braket(psi, w.matrix, psi) - wv) / std::max(1.0, std::abs(wv));

  const Complex c = 1.0 / braket(psi, phi);
  r.pre_action = (w.matrix * psi - wv * c * phi).norm();

  const Complex post_mean = braket(phi, w.parent.matrix(), phi) / k;
  r.post_action = (w.matrix * phi - post_mean * phi).norm();

  const Matrix outer = phi * (phi.adjoint() * w.parent.matrix()) / k;
  r.outer_product = (w.matrix - outer).cwiseAbs().maxCoeff();
  return r;
}

}  // namespace wm
