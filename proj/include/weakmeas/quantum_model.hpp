#pragma once

#include <vector>

#include "weakmeas/linalg.hpp"

namespace wm {

/// Hermitian matrix with its spectral decomposition computed once at
/// construction.
class Observable {
 public:
  explicit Observable(Matrix matrix, const Tolerances& tol = kDefaultTolerances);
  /// For operators whose eigenbasis is known in closed form (grid momentum).
  static Observable from_spectrum(RealVector eigenvalues, Matrix eigenvectors,
                                  const Tolerances& tol = kDefaultTolerances);

  const Matrix& matrix() const noexcept { return matrix_; }
  const SpectralDecomposition& spectrum() const noexcept { return spectrum_; }
  Eigen::Index dim() const noexcept { return matrix_.rows(); }
  Fingerprint fingerprint() const { return fingerprint_; }

  struct SpectralProjector {
    double value;
    Matrix projector;
  };
  std::vector<SpectralProjector> projectors() const;

  /// exp(-i * theta * O) applied to v through the eigenbasis.
  Vector apply_exponential(Complex theta, const Vector& v) const;

 private:
  Observable(Matrix matrix, SpectralDecomposition spectrum);

  Matrix matrix_;
  SpectralDecomposition spectrum_;
  Fingerprint fingerprint_;
};

/// Pre-selected |psi>, post-selected |phi> and k = |<phi|psi>|^2.
class PPSEnsemble {
 public:
  PPSEnsemble(StateVector pre, StateVector post, const Tolerances& tol = kDefaultTolerances);

  const StateVector& pre() const noexcept { return pre_; }
  const StateVector& post() const noexcept { return post_; }
  /// <phi|psi>
  Complex overlap() const noexcept { return overlap_; }
  double overlap_k() const noexcept { return k_; }
  Eigen::Index dim() const noexcept { return pre_.dim(); }
  Fingerprint fingerprint() const { return combine(pre_.fingerprint(), post_.fingerprint()); }

 private:
  StateVector pre_;
  StateVector post_;
  Complex overlap_;
  double k_;
};

struct WeakValue {
  Complex value;
  Fingerprint ensemble;
  Fingerprint observable;
};

/// A_w = |phi><phi| A / k, materialized densely, with its provenance.
struct WeakOperator {
  Matrix matrix;
  PPSEnsemble ensemble;
  Observable parent;
};

/// <phi|A|psi> / <phi|psi>.
WeakValue weak_value(const PPSEnsemble& ens, const Observable& a);

WeakOperator weak_operator(const PPSEnsemble& ens, const Observable& a);

Matrix adjoint_weak_operator(const WeakOperator& w);

/// Residuals of the defining identities of the weak operator.
struct WeakOperatorResiduals {
  double mean_relative;  // |<psi|A_w|psi> - <A>_w| / max(1, |<A>_w|)
  double pre_action;     // |A_w psi - <A>_w c phi|, c = 1/<psi|phi>
  double post_action;    // |A_w phi - (<phi|A|phi>/k) phi|
  double outer_product;  // max |A_w - |phi>(<phi|A)/k|
};

WeakOperatorResiduals weak_operator_residuals(const WeakOperator& w);

}  // namespace wm
