#pragma once

#include "weakmeas/quantum_model.hpp"
#include "weakmeas/uncertainty.hpp"

namespace wm {

/// Position and momentum built from the ladder operator truncated to the
/// lowest `dim` Fock levels. The canonical commutator holds on every level
/// except the top one, where [X, P] = i hbar (1 - dim).
struct TruncatedFockPair {
  Eigen::Index dim = 0;
  double hbar = 1.0;
  Matrix a;
  Matrix a_dagger;
  Observable x;
  Observable p;
  double commutator_defect = 0.0;  // max |[X,P] - i hbar| below the top level
  double top_level_deviation = 0.0;

  static TruncatedFockPair build(Eigen::Index dim = 40, double hbar = 1.0);

  /// Fock state |n>.
  StateVector number_state(Eigen::Index n) const;
  /// Coherent state with amplitude alpha, renormalized inside the truncation.
  StateVector coherent_state(Complex alpha) const;
  /// Population of the top `levels` Fock levels.
  double top_population(const StateVector& s, Eigen::Index levels = 2) const;
};

inline constexpr double kFockPopulationGuard = 1e-8;

/// First weak-operator relation for the pair (X, P) with the matrix
/// commutator, plus diagnostics comparing it with the canonical closed form
/// hbar/k +- 2 Im(<X>_w <P>_w*) + (2 hbar/k)|<phi|L|psibar>|^2, L = a^dagger
/// on the minus branch and a on the plus branch.
RelationReport conjugate_pair_check(const TruncatedFockPair& fock, const PPSEnsemble& ens,
                                    const PsibarChoice& psibar, const Tolerances& tol = kDefaultTolerances,
                                    double population_guard = kFockPopulationGuard);

}  // namespace wm
