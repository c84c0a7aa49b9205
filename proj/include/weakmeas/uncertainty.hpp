#pragma once

#include <optional>
#include <variant>

#include "weakmeas/quantum_model.hpp"
#include "weakmeas/random.hpp"
#include "weakmeas/relation_report.hpp"

namespace wm {

/// <psi|(O - <O>)(O^dagger - <O^dagger>)|psi>, evaluated as a squared norm so
/// it is non-negative by construction.
struct NHVariance {
  double value = 0.0;
  Fingerprint state = 0;
  Fingerprint op = 0;
};

NHVariance nh_variance(const StateVector& state, const Matrix& op);

/// O^dagger|psi> = mean |psi> + spread |psibar_O>, with <psi|psibar_O> = 0.
struct VaidmanParts {
  Complex mean;  // <psi|O^dagger|psi>
  double spread = 0.0;
  std::optional<StateVector> orthogonal_state;  // absent when spread vanishes
};

VaidmanParts vaidman_decompose(const StateVector& state, const Matrix& op,
                               const Tolerances& tol = kDefaultTolerances);

// How the auxiliary state orthogonal to |psi> is chosen.
struct OptimalPsibar {};
struct SuppliedPsibar {
  StateVector state;
};
struct RandomPsibar {
  Seed seed;
};
using PsibarChoice = std::variant<OptimalPsibar, SuppliedPsibar, RandomPsibar>;

PsibarMode mode_of(const PsibarChoice& choice);

/// Right-hand side of the first weak-operator relation for one sign branch:
///   commutator = +-(i/k)<phi|[A,B]|phi>
///   cross      = +-i(<A>_w* <B>_w - <A>_w <B>_w*)
///   overlap    = |<psi|(A_w +- i B_w)|psibar>|^2
struct Ur1Terms {
  double commutator = 0.0;
  double cross = 0.0;
  double overlap = 0.0;
  double rhs_total = 0.0;
  double imag_residue = 0.0;
};

Ur1Terms ur1_terms(const PPSEnsemble& ens, const Observable& a, const Observable& b,
                   const StateVector& psibar, Sign sign, const Tolerances& tol = kDefaultTolerances);

/// A report together with the orthogonal state that produced it.
struct RelationEvaluation {
  RelationReport report;
  std::optional<StateVector> psibar;
};

RelationEvaluation ur1_evaluate(const PPSEnsemble& ens, const Observable& a, const Observable& b,
                                const PsibarChoice& psibar, const Tolerances& tol = kDefaultTolerances,
                                std::optional<Sign> force_sign = std::nullopt);

/// Both sign branches are evaluated (each with its own optimal psibar in
/// optimal mode) and the larger bound is reported unless force_sign is set.
RelationReport ur1_check(const PPSEnsemble& ens, const Observable& a, const Observable& b,
                         const PsibarChoice& psibar, const Tolerances& tol = kDefaultTolerances,
                         std::optional<Sign> force_sign = std::nullopt);

/// Delta^2 A_w + Delta^2 B_w >= 1/2 |<psi|(A_w + B_w)|psibar>|^2. In optimal
/// mode psibar is the Vaidman orthogonal state of A_w + B_w.
RelationReport ur2_check(const PPSEnsemble& ens, const Observable& a, const Observable& b,
                         const PsibarChoice& psibar, const Tolerances& tol = kDefaultTolerances);

/// Largest |2 dA_w^2 + 2 dB_w^2 - |(C^+ + aD^+)psi|^2 - |(C^+ - aD^+)psi|^2| over a in {1, i}.
double parallelogram_identity_check(const PPSEnsemble& ens, const Observable& a, const Observable& b);

/// Hermitian-pair forms (post-selection equal to pre-selection).
RelationReport mp1_check(const StateVector& state, const Observable& a, const Observable& b,
                         const PsibarChoice& psibar, const Tolerances& tol = kDefaultTolerances,
                         std::optional<Sign> force_sign = std::nullopt);
RelationReport mp2_check(const StateVector& state, const Observable& a, const Observable& b,
                         const PsibarChoice& psibar, const Tolerances& tol = kDefaultTolerances);

/// dA * dB >= |<[A,B]>| / 2.
RelationReport robertson_check(const StateVector& state, const Observable& a, const Observable& b,
                               const Tolerances& tol = kDefaultTolerances);

}  // namespace wm
