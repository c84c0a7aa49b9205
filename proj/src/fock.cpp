#include "weakmeas/fock.hpp"

#include <cmath>
#include <string>

#include "weakmeas/errors.hpp"

namespace wm {

namespace {

Matrix lowering(Eigen::Index dim) {
  Matrix a = Matrix::Zero(dim, dim);
  for (Eigen::Index n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

}  // namespace

TruncatedFockPair TruncatedFockPair::build(Eigen::Index dim, double hbar) {
  if (dim < 2) throw Error(ErrorKind::invalid_dimension, "Fock truncation needs at least two levels");
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw Error(ErrorKind::invalid_parameter, "hbar must be positive");
  const Matrix a = lowering(dim);
  const Matrix ad = a.adjoint();
  const double s = std::sqrt(hbar / 2.0);
  Observable x(s * (a + ad));
  Observable p((kI * s) * (ad - a));

  const Matrix comm = x.matrix() * p.matrix() - p.matrix() * x.matrix();
  const Matrix deviation = comm - (kI * hbar) * Matrix::Identity(dim, dim);
  const double below_top = deviation.topLeftCorner(dim - 1, dim - 1).cwiseAbs().maxCoeff();
  const double top = std::abs(deviation(dim - 1, dim - 1));
  return TruncatedFockPair{dim, hbar, a, ad, std::move(x), std::move(p), below_top, top};
}

StateVector TruncatedFockPair::number_state(Eigen::Index n) const { return StateVector::basis(dim, n); }

StateVector TruncatedFockPair::coherent_state(Complex alpha) const {
  Vector v(dim);
  // |alpha> ~ sum_n alpha^n / sqrt(n!) |n>, built by recurrence.
  v[0] = 1.0;
  for (Eigen::Index n = 1; n < dim; ++n) v[n] = v[n - 1] * alpha / std::sqrt(static_cast<double>(n));
  return StateVector::normalized(v);
}

double TruncatedFockPair::top_population(const StateVector& s, Eigen::Index levels) const {
  if (s.dim() != dim) throw Error(ErrorKind::shape, "state does not live in the truncated Fock space");
  return s.vec().tail(levels).squaredNorm();
}

RelationReport conjugate_pair_check(const TruncatedFockPair& fock, const PPSEnsemble& ens,
                                    const PsibarChoice& psibar, const Tolerances& tol, double population_guard) {
  for (const auto* s : {&ens.pre(), &ens.post()}) {
    const double pop = fock.top_population(*s);
    if (pop > population_guard)
      throw Error(ErrorKind::truncation,
                  "population " + std::to_string(pop) + " on the top two Fock levels exceeds the guard");
  }

  auto [r, bar] = ur1_evaluate(ens, fock.x, fock.p, psibar, tol);
  r.relation = RelationId::conjugate_pair;

  const double k = ens.overlap_k();
  const double s = sign_value(*r.sign);
  const Complex wx = weak_value(ens, fock.x).value;
  const Complex wp = weak_value(ens, fock.p).value;
  const double ideal_commutator = -s * fock.hbar / k;
  const double closed_cross = s * 2.0 * (wx * std::conj(wp)).imag();

  double closed_ladder = 0.0;
  if (bar) {
    const Matrix& ladder = *r.sign == Sign::minus ? fock.a_dagger : fock.a;
    closed_ladder = 2.0 * fock.hbar / k * std::norm(braket(ens.post().vec(), ladder, bar->vec()));
  }

  const double commutator = *r.term("commutator");
  const double overlap = *r.term("overlap");
  const double ideal_rhs = ideal_commutator + closed_cross + closed_ladder;
  r.diagnostics = {
      {"ideal_commutator", ideal_commutator},
      {"commutator_discrepancy", std::abs(commutator - ideal_commutator)},
      {"closed_form_cross", closed_cross},
      {"closed_form_ladder", closed_ladder},
      {"ladder_discrepancy", std::abs(closed_ladder - overlap)},
      {"ideal_rhs", ideal_rhs},
      {"ideal_slack", r.lhs - ideal_rhs},
  };
  if ((ens.pre().vec() - ens.post().vec()).norm() <= tol.construction)
    r.notes.push_back("post-selection equals pre-selection: ladder term evaluated as <psi|L|psibar>");
  return r;
}

}  // namespace wm
