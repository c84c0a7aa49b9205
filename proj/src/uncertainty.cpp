#include "weakmeas/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "weakmeas/errors.hpp"

namespace wm {

namespace {

// The weak-operator relations are evaluated in extended precision. Weak
// operators carry a 1/k factor, so for nearly orthogonal selections both
// sides grow like 1/k while the cancellation inside <phi|psi> costs about
// 1/sqrt(k) in relative accuracy; double precision then loses the
// saturation of the optimal bound well before k reaches the overlap floor.
using XComplex = std::complex<long double>;
using XVector = Eigen::Matrix<XComplex, Eigen::Dynamic, 1>;
using XMatrix = Eigen::Matrix<XComplex, Eigen::Dynamic, Eigen::Dynamic>;

const XComplex kXI{0.0L, 1.0L};

XVector extend(const Vector& v) { return v.cast<XComplex>(); }
XMatrix extend(const Matrix& m) { return m.cast<XComplex>(); }
Vector round_down(const XVector& v) { return v.cast<Complex>(); }

// f = (O^dagger - <O^dagger>)|psi>
template <typename Vec, typename Mat>
Vec shifted_adjoint_action(const Vec& psi, const Mat& op) {
  const Vec v = op.adjoint() * psi;
  return v - psi.dot(v) * psi;
}

// Component of v orthogonal to the unit vector psi, with one re-orthogonalization.
XVector orthogonal_part(const XVector& psi, const XVector& v) {
  XVector c = v - psi.dot(v) * psi;
  c -= psi.dot(c) * psi;
  return c;
}

struct ExtendedPsibar {
  XVector vec;
  StateVector rounded;
};

ExtendedPsibar extended_psibar(XVector unit) {
  StateVector rounded = StateVector::normalized(round_down(unit));
  return {std::move(unit), std::move(rounded)};
}

// Weak operator |phi><phi|A / k built from the primary inputs.
XMatrix extended_weak_operator(const XVector& phi, long double k, const Matrix& a) {
  return phi * (phi.adjoint() * extend(a)) / k;
}

// Shared shape of the first relation: lhs = |f|^2 + |g|^2 with f, g the
// shifted adjoint actions of two operators, a sign-carrying real part
// (commutator and cross terms) and the overlap term with psibar.
struct SumRelation {
  const StateVector& state;
  XVector psi;
  XMatrix op_a;
  XMatrix op_b;
  XComplex commutator;  // + branch value, real in exact arithmetic
  XComplex cross;       // + branch value, real in exact arithmetic
  double residue_scale;
  XVector f;
  XVector g;
  long double lhs_extended;
  double lhs;

  SumRelation(const StateVector& st, XMatrix a, XMatrix b, XComplex comm, XComplex crs, double scale)
      : state(st), psi(extend(st.vec())), op_a(std::move(a)), op_b(std::move(b)), commutator(comm), cross(crs),
        residue_scale(scale) {
    f = shifted_adjoint_action(psi, op_a);
    g = shifted_adjoint_action(psi, op_b);
    lhs_extended = f.squaredNorm() + g.squaredNorm();
    lhs = static_cast<double>(lhs_extended);
  }

  double imag_residue() const {
    return static_cast<double>(std::max(std::abs(commutator.imag()), std::abs(cross.imag())));
  }

  void assert_real(const Tolerances& tol) const {
    const double residue = imag_residue();
    if (residue > tol.reality * residue_scale)
      throw Error(ErrorKind::contract_violation,
                  "imaginary residue " + std::to_string(residue) + " on a term that must be real");
  }

  long double overlap_term(const XVector& psibar, Sign s) const {
    const XVector v = op_a * psibar + (static_cast<long double>(sign_value(s)) * kXI) * (op_b * psibar);
    return std::norm(psi.dot(v));
  }

  Ur1Terms terms(const XVector* psibar, Sign s, long double* rhs_extended = nullptr) const {
    const long double sv = sign_value(s);
    const long double comm = sv * commutator.real();
    const long double crs = sv * cross.real();
    const long double ov = psibar ? overlap_term(*psibar, s) : 0.0L;
    if (rhs_extended) *rhs_extended = comm + crs + ov;
    Ur1Terms t;
    t.commutator = static_cast<double>(comm);
    t.cross = static_cast<double>(crs);
    t.overlap = static_cast<double>(ov);
    t.rhs_total = static_cast<double>(comm + crs + ov);
    t.imag_residue = imag_residue();
    return t;
  }

  // Cauchy-Schwarz partner of the s branch: (C^dagger -+ i D^dagger)|psi>.
  std::optional<ExtendedPsibar> optimal_psibar(Sign s, const Tolerances& tol) const {
    const XVector v = f - (static_cast<long double>(sign_value(s)) * kXI) * g;
    const long double scale = std::max(1.0L, f.norm() + g.norm());
    const XVector c = orthogonal_part(psi, v);
    const long double n = c.norm();
    if (n <= tol.construction * scale) return std::nullopt;
    return extended_psibar(c / n);
  }
};

void require_orthogonal(const StateVector& psi, const StateVector& psibar, const Tolerances& tol) {
  if (psibar.dim() != psi.dim()) throw Error(ErrorKind::shape, "psibar dimension mismatch");
  const double ov = std::abs(braket(psi.vec(), psibar.vec()));
  if (ov > tol.spectral)
    throw Error(ErrorKind::contract_violation,
                "psibar is not orthogonal to the pre-selected state (|<psi|psibar>| = " + std::to_string(ov) + ")");
}

std::optional<StateVector> resolve_fixed_psibar(const StateVector& psi, const PsibarChoice& choice,
                                                const Tolerances& tol) {
  if (const auto* s = std::get_if<SuppliedPsibar>(&choice)) {
    require_orthogonal(psi, s->state, tol);
    return s->state;
  }
  if (const auto* r = std::get_if<RandomPsibar>(&choice)) {
    Rng rng(r->seed);
    return rng.orthogonal_state(psi);
  }
  return std::nullopt;
}

std::optional<ExtendedPsibar> extend_fixed(const std::optional<StateVector>& psibar) {
  if (!psibar) return std::nullopt;
  return ExtendedPsibar{extend(psibar->vec()), *psibar};
}

struct BranchResult {
  Ur1Terms terms;
  long double rhs_extended;
  Sign sign;
  std::optional<ExtendedPsibar> psibar;
};

BranchResult evaluate_branch(const SumRelation& rel, const PsibarChoice& choice,
                             const std::optional<ExtendedPsibar>& fixed, Sign s, const Tolerances& tol) {
  std::optional<ExtendedPsibar> psibar =
      std::holds_alternative<OptimalPsibar>(choice) ? rel.optimal_psibar(s, tol) : fixed;
  const XVector* v = psibar ? &psibar->vec : nullptr;
  long double rhs = 0.0L;
  Ur1Terms t = rel.terms(v, s, &rhs);
  return {t, rhs, s, std::move(psibar)};
}

RelationEvaluation sum_relation_report(RelationId id, const SumRelation& rel, const PsibarChoice& choice,
                                       const Tolerances& tol, std::optional<Sign> force_sign) {
  rel.assert_real(tol);
  const auto fixed = extend_fixed(resolve_fixed_psibar(rel.state, choice, tol));

  BranchResult chosen = evaluate_branch(rel, choice, fixed, Sign::plus, tol);
  if (force_sign) {
    if (*force_sign == Sign::minus) chosen = evaluate_branch(rel, choice, fixed, Sign::minus, tol);
  } else {
    BranchResult minus = evaluate_branch(rel, choice, fixed, Sign::minus, tol);
    const double diff = minus.terms.rhs_total - chosen.terms.rhs_total;
    const double tie = tol.relation * relation_scale(rel.lhs);
    if (diff > tie) {
      chosen = std::move(minus);
    } else if (std::abs(diff) <= tie) {
      // Equal bounds: keep the branch whose sign-carrying part is non-negative.
      if (chosen.terms.commutator + chosen.terms.cross < 0.0) chosen = std::move(minus);
    }
  }

  RelationReport r;
  r.relation = id;
  r.lhs = rel.lhs;
  r.rhs_terms = {{"commutator", chosen.terms.commutator},
                 {"cross", chosen.terms.cross},
                 {"overlap", chosen.terms.overlap}};
  r.rhs_total = chosen.terms.rhs_total;
  r.slack = static_cast<double>(rel.lhs_extended - chosen.rhs_extended);
  r.sign = chosen.sign;
  r.psibar_mode = mode_of(choice);
  r.tight = std::abs(r.slack) <= tol.relation * relation_scale(r.lhs);
  r.imag_residue = chosen.terms.imag_residue;
  std::optional<StateVector> psibar;
  if (chosen.psibar) {
    r.fingerprints.push_back({"psibar", chosen.psibar->rounded.fingerprint()});
    psibar = chosen.psibar->rounded;
  } else if (std::holds_alternative<OptimalPsibar>(choice)) {
    r.notes.push_back("optimal psibar vanishes; overlap term set to 0");
    r.tight = r.slack <= tol.relation * relation_scale(r.lhs);
  }
  return {std::move(r), std::move(psibar)};
}

double commutator_scale(const Matrix& a, const Matrix& b, const Vector& v) {
  return (a * v).norm() * (b * v).norm();
}

void require_dims(Eigen::Index n, const Observable& a, const Observable& b) {
  if (a.dim() != n || b.dim() != n) throw Error(ErrorKind::shape, "observable dimension mismatch");
}

struct ExtendedEnsemble {
  XVector psi;
  XVector phi;
  XComplex phi_psi;  // <phi|psi>
  long double k;
};

ExtendedEnsemble extend(const PPSEnsemble& ens) {
  ExtendedEnsemble e{extend(ens.pre().vec()), extend(ens.post().vec()), {}, 0.0L};
  e.phi_psi = e.phi.dot(e.psi);
  e.k = std::norm(e.phi_psi);
  return e;
}

SumRelation weak_sum_relation(const PPSEnsemble& ens, const Observable& a, const Observable& b) {
  require_dims(ens.dim(), a, b);
  const ExtendedEnsemble e = extend(ens);
  const XMatrix ax = extend(a.matrix()), bx = extend(b.matrix());
  const XComplex commutator = kXI / e.k * e.phi.dot((ax * bx - bx * ax) * e.phi);
  const XComplex wa = e.phi.dot(ax * e.psi) / e.phi_psi;
  const XComplex wb = e.phi.dot(bx * e.psi) / e.phi_psi;
  const XComplex cross = kXI * (std::conj(wa) * wb - wa * std::conj(wb));
  const double scale = std::max(1.0, commutator_scale(a.matrix(), b.matrix(), ens.post().vec()) /
                                             ens.overlap_k() +
                                         static_cast<double>(std::abs(wa) * std::abs(wb)));
  return SumRelation(ens.pre(), extended_weak_operator(e.phi, e.k, a.matrix()),
                     extended_weak_operator(e.phi, e.k, b.matrix()), commutator, cross, scale);
}

SumRelation hermitian_sum_relation(const StateVector& state, const Observable& a, const Observable& b) {
  require_dims(state.dim(), a, b);
  const XVector psi = extend(state.vec());
  const XMatrix ax = extend(a.matrix()), bx = extend(b.matrix());
  const XComplex commutator = kXI * psi.dot((ax * bx - bx * ax) * psi);
  const double scale = std::max(1.0, commutator_scale(a.matrix(), b.matrix(), state.vec()));
  return SumRelation(state, ax, bx, commutator, XComplex{0.0L, 0.0L}, scale);
}

RelationReport half_sum_report(RelationId id, const StateVector& state, const XMatrix& op_a, const XMatrix& op_b,
                               const PsibarChoice& choice, const Tolerances& tol) {
  const XVector psi = extend(state.vec());
  const XMatrix sum = op_a + op_b;
  const long double lhs = shifted_adjoint_action(psi, op_a).squaredNorm() +
                          shifted_adjoint_action(psi, op_b).squaredNorm();

  std::optional<ExtendedPsibar> psibar;
  if (std::holds_alternative<OptimalPsibar>(choice)) {
    // Orthogonal state of the sum from its decomposition.
    const XVector c = orthogonal_part(psi, sum.adjoint() * psi);
    const long double n = c.norm();
    if (n > tol.construction) psibar = extended_psibar(c / n);
  } else {
    psibar = extend_fixed(resolve_fixed_psibar(state, choice, tol));
  }
  const long double overlap = psibar ? 0.5L * std::norm(psi.dot(sum * psibar->vec)) : 0.0L;

  RelationReport r;
  r.relation = id;
  r.lhs = static_cast<double>(lhs);
  r.rhs_terms = {{"overlap", static_cast<double>(overlap)}};
  r.rhs_total = static_cast<double>(overlap);
  r.slack = static_cast<double>(lhs - overlap);
  r.psibar_mode = mode_of(choice);
  r.tight = std::abs(r.slack) <= tol.relation * relation_scale(r.lhs);
  if (psibar) {
    r.fingerprints.push_back({"psibar", psibar->rounded.fingerprint()});
  } else if (std::holds_alternative<OptimalPsibar>(choice)) {
    r.notes.push_back("optimal psibar vanishes; overlap term set to 0");
  }
  return r;
}

}  // namespace

PsibarMode mode_of(const PsibarChoice& choice) {
  if (std::holds_alternative<OptimalPsibar>(choice)) return PsibarMode::optimal;
  if (std::holds_alternative<SuppliedPsibar>(choice)) return PsibarMode::supplied;
  return PsibarMode::random;
}

NHVariance nh_variance(const StateVector& state, const Matrix& op) {
  if (op.rows() != state.dim() || op.cols() != state.dim())
    throw Error(ErrorKind::shape, "nh_variance: dimension mismatch");
  return {shifted_adjoint_action(state.vec(), op).squaredNorm(), state.fingerprint(), fingerprint(op)};
}

VaidmanParts vaidman_decompose(const StateVector& state, const Matrix& op, const Tolerances& tol) {
  if (op.rows() != state.dim() || op.cols() != state.dim())
    throw Error(ErrorKind::shape, "vaidman_decompose: dimension mismatch");
  const Vector& psi = state.vec();
  const Vector v = op.adjoint() * psi;
  VaidmanParts parts;
  parts.mean = braket(psi, v);
  auto [rest, n] = orthogonal_component(state, v);
  parts.spread = n;
  if (n > tol.construction) parts.orthogonal_state = StateVector(rest / n);
  return parts;
}

Ur1Terms ur1_terms(const PPSEnsemble& ens, const Observable& a, const Observable& b,
                   const StateVector& psibar, Sign sign, const Tolerances& tol) {
  require_orthogonal(ens.pre(), psibar, tol);
  const SumRelation rel = weak_sum_relation(ens, a, b);
  rel.assert_real(tol);
  const XVector v = extend(psibar.vec());
  return rel.terms(&v, sign);
}

RelationEvaluation ur1_evaluate(const PPSEnsemble& ens, const Observable& a, const Observable& b,
                                const PsibarChoice& psibar, const Tolerances& tol, std::optional<Sign> force_sign) {
  RelationEvaluation e =
      sum_relation_report(RelationId::ur1, weak_sum_relation(ens, a, b), psibar, tol, force_sign);
  e.report.fingerprints.insert(e.report.fingerprints.begin(), {{"ensemble", ens.fingerprint()},
                                                               {"A", a.fingerprint()},
                                                               {"B", b.fingerprint()}});
  return e;
}

RelationReport ur1_check(const PPSEnsemble& ens, const Observable& a, const Observable& b,
                         const PsibarChoice& psibar, const Tolerances& tol, std::optional<Sign> force_sign) {
  return ur1_evaluate(ens, a, b, psibar, tol, force_sign).report;
}

RelationReport ur2_check(const PPSEnsemble& ens, const Observable& a, const Observable& b,
                         const PsibarChoice& psibar, const Tolerances& tol) {
  require_dims(ens.dim(), a, b);
  const ExtendedEnsemble e = extend(ens);
  RelationReport r = half_sum_report(RelationId::ur2, ens.pre(), extended_weak_operator(e.phi, e.k, a.matrix()),
                                     extended_weak_operator(e.phi, e.k, b.matrix()), psibar, tol);
  r.fingerprints.insert(r.fingerprints.begin(), {{"ensemble", ens.fingerprint()},
                                                 {"A", a.fingerprint()},
                                                 {"B", b.fingerprint()}});
  return r;
}

double parallelogram_identity_check(const PPSEnsemble& ens, const Observable& a, const Observable& b) {
  require_dims(ens.dim(), a, b);
  const Vector f = shifted_adjoint_action(ens.pre().vec(), weak_operator(ens, a).matrix);
  const Vector g = shifted_adjoint_action(ens.pre().vec(), weak_operator(ens, b).matrix);
  const double lhs = 2.0 * f.squaredNorm() + 2.0 * g.squaredNorm();
  double worst = 0.0;
  for (Complex alpha : {Complex{1.0, 0.0}, kI}) {
    const double rhs = (f + alpha * g).squaredNorm() + (f - alpha * g).squaredNorm();
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

RelationReport mp1_check(const StateVector& state, const Observable& a, const Observable& b,
                         const PsibarChoice& psibar, const Tolerances& tol, std::optional<Sign> force_sign) {
  RelationReport r =
      sum_relation_report(RelationId::mp1, hermitian_sum_relation(state, a, b), psibar, tol, force_sign).report;
  r.fingerprints.insert(r.fingerprints.begin(), {{"state", state.fingerprint()},
                                                 {"A", a.fingerprint()},
                                                 {"B", b.fingerprint()}});
  return r;
}

RelationReport mp2_check(const StateVector& state, const Observable& a, const Observable& b,
                         const PsibarChoice& psibar, const Tolerances& tol) {
  require_dims(state.dim(), a, b);
  RelationReport r = half_sum_report(RelationId::mp2, state, extend(a.matrix()), extend(b.matrix()), psibar, tol);
  r.fingerprints.insert(r.fingerprints.begin(), {{"state", state.fingerprint()},
                                                 {"A", a.fingerprint()},
                                                 {"B", b.fingerprint()}});
  return r;
}

RelationReport robertson_check(const StateVector& state, const Observable& a, const Observable& b,
                               const Tolerances& tol) {
  require_dims(state.dim(), a, b);
  const Vector& psi = state.vec();
  const double da = std::sqrt(nh_variance(state, a.matrix()).value);
  const double db = std::sqrt(nh_variance(state, b.matrix()).value);
  const Matrix comm = a.matrix() * b.matrix() - b.matrix() * a.matrix();
  const Complex c = braket(psi, comm, psi);

  RelationReport r;
  r.relation = RelationId::robertson;
  r.lhs = da * db;
  r.rhs_terms = {{"commutator", 0.5 * std::abs(c)}};
  r.rhs_total = 0.5 * std::abs(c);
  r.slack = r.lhs - r.rhs_total;
  r.tight = std::abs(r.slack) <= tol.relation * relation_scale(r.lhs);
  // <[A,B]> is purely imaginary for Hermitian A, B.
  r.imag_residue = std::abs(c.real());
  r.fingerprints = {{"state", state.fingerprint()}, {"A", a.fingerprint()}, {"B", b.fingerprint()}};
  return r;
}

}  // namespace wm
