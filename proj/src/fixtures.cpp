#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "weakmeas/complementarity.hpp"
#include "weakmeas/fock.hpp"
#include "weakmeas/harness.hpp"
#include "weakmeas/pointer.hpp"
#include "weakmeas/uncertainty.hpp"

namespace wm {

namespace {

Matrix pauli(char which) {
  Matrix m(2, 2);
  switch (which) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'y': m << 0, -kI, kI, 0; break;
    default: m << 1, 0, 0, -1;
  }
  return m;
}

StateVector qubit(double c0, Complex c1) {
  Vector v(2);
  v << c0, c1;
  return StateVector::normalized(v);
}

class Suite {
 public:
  void near(std::string name, double observed, double expected, double tol) {
    checks_.push_back({std::move(name), observed, expected, tol, std::abs(observed - expected) <= tol});
  }
  void at_most(std::string name, double observed, double bound) {
    checks_.push_back({std::move(name), observed, bound, 0.0, observed <= bound});
  }
  void above(std::string name, double observed, double bound) {
    checks_.push_back({std::move(name), observed, bound, 0.0, observed > bound});
  }
  void row(int dim, RelationReport r) { rows_.push_back({dim, static_cast<int>(rows_.size()), 0, std::move(r)}); }

  std::vector<CheckResult> checks_;
  std::vector<ReportRow> rows_;
};

double max_term_difference(const RelationReport& x, const RelationReport& y) {
  double d = std::abs(x.lhs - y.lhs) + std::abs(x.rhs_total - y.rhs_total);
  if (x.rhs_terms.size() != y.rhs_terms.size()) return std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.rhs_terms.size(); ++i)
    d = std::max(d, std::abs(x.rhs_terms[i].value - y.rhs_terms[i].value));
  return d;
}

void weak_value_fixtures(Suite& s) {
  const double t = std::numbers::pi / 8.0;
  const Observable sz(pauli('z'));
  const PPSEnsemble anomalous(qubit(std::cos(t), std::sin(t)), qubit(1.0, -1.0));
  const Complex wv = weak_value(anomalous, sz).value;
  s.near("weak_value.anomalous_qubit", wv.real(), 1.0 + std::numbers::sqrt2, 1e-12);
  s.near("weak_value.anomalous_qubit.imag", wv.imag(), 0.0, 1e-12);
  s.above("weak_value.anomalous_qubit.outside_spectrum", std::abs(wv.real()), 1.0);

  s.near("weak_value.basis_qubit", weak_value(PPSEnsemble(qubit(1, 0), qubit(1, 0)), sz).value.real(), 1.0, 1e-14);

  const StateVector psi = haar_random_state(5, Seed{11});
  const Observable a(random_hermitian(5, Seed{12}));
  const Complex mean = braket(psi.vec(), a.matrix(), psi.vec());
  s.near("weak_value.expectation_limit", std::abs(weak_value(PPSEnsemble(psi, psi), a).value - mean), 0.0, 1e-12);

  const PPSEnsemble ens(psi, haar_random_state(5, Seed{13}));
  const WeakOperatorResiduals res = weak_operator_residuals(weak_operator(ens, a));
  s.at_most("weak_operator.mean", res.mean_relative, 1e-12);
  s.at_most("weak_operator.pre_action", res.pre_action, 1e-10);
  s.at_most("weak_operator.post_action", res.post_action, 1e-10);

  s.near("nh_variance.hermitian_qubit", nh_variance(qubit(1, 1), pauli('z')).value, 1.0, 1e-14);
  const VaidmanParts vp = vaidman_decompose(qubit(1, 0), pauli('x'));
  s.near("vaidman.sigma_x_ground.mean", std::abs(vp.mean), 0.0, 1e-14);
  s.near("vaidman.sigma_x_ground.spread", vp.spread, 1.0, 1e-14);
}

void relation_fixtures(Suite& s) {
  const Observable sx(pauli('x')), sy(pauli('y')), sz(pauli('z'));
  const RelationReport rob = robertson_check(qubit(1, 0), sx, sy);
  s.near("robertson.pauli.lhs", rob.lhs, 1.0, 1e-14);
  s.near("robertson.pauli.rhs", rob.rhs_total, 1.0, 1e-14);
  s.row(2, rob);

  const PPSEnsemble q(qubit(1, 0), qubit(1, 1));
  for (Sign sign : {Sign::plus, Sign::minus}) {
    const RelationReport r = ur1_check(q, sz, sx, OptimalPsibar{}, kDefaultTolerances, sign);
    s.near(std::string("ur1.qubit_optimal.") + std::string(to_string(sign)), r.slack, 0.0, 1e-9);
    s.row(2, r);
  }
  s.at_most("ur1.parallelogram.qubit", parallelogram_identity_check(q, sz, sx), 1e-12);

  // Optimal second relation: rhs equals half the non-Hermitian variance of A_w + B_w.
  const PPSEnsemble ens(haar_random_state(4, Seed{21}), haar_random_state(4, Seed{22}));
  const Observable a(random_hermitian(4, Seed{23})), b(random_hermitian(4, Seed{24}));
  const RelationReport ur2 = ur2_check(ens, a, b, OptimalPsibar{});
  const Matrix sum = weak_operator(ens, a).matrix + weak_operator(ens, b).matrix;
  s.near("ur2.optimal_rhs", ur2.rhs_total, 0.5 * nh_variance(ens.pre(), sum).value,
         1e-10 * relation_scale(ur2.lhs));
  s.row(4, ur2);

  // Equal pre- and post-selection reduces both relations to the Hermitian forms.
  const StateVector psi = ens.pre();
  const PPSEnsemble same(psi, psi);
  const PsibarChoice fixed = SuppliedPsibar{Rng(Seed{25}).orthogonal_state(psi)};
  for (Sign sign : {Sign::plus, Sign::minus}) {
    const RelationReport w = ur1_check(same, a, b, fixed, kDefaultTolerances, sign);
    const RelationReport h = mp1_check(psi, a, b, fixed, kDefaultTolerances, sign);
    s.at_most(std::string("reduction.ur1_mp1.") + std::string(to_string(sign)), max_term_difference(w, h), 1e-12);
    s.row(4, h);
  }
  const RelationReport w2 = ur2_check(same, a, b, fixed);
  const RelationReport h2 = mp2_check(psi, a, b, fixed);
  s.at_most("reduction.ur2_mp2", max_term_difference(w2, h2), 1e-12);
  s.row(4, h2);

  const TruncatedFockPair fock = TruncatedFockPair::build(40, 1.0);
  const StateVector ground = fock.number_state(0);
  const RelationReport g = conjugate_pair_check(fock, PPSEnsemble(ground, ground), OptimalPsibar{});
  s.near("fock.ground.lhs", g.lhs, 1.0, 1e-8);
  s.near("fock.ground.slack", g.slack, 0.0, 1e-8);
  s.row(40, g);
  const StateVector one = fock.number_state(1);
  const RelationReport e = conjugate_pair_check(fock, PPSEnsemble(one, one), OptimalPsibar{});
  s.near("fock.first_excited.lhs", e.lhs, 3.0, 1e-8);
  s.row(40, e);
}

void complementarity_fixtures(Suite& s) {
  const StateVector a = qubit(1, 0), b = qubit(1, 1);
  const StateVector psi = qubit(0.6, Complex(0.0, 0.8));
  const ProjectorWeakValuePair pair = projector_weak_value_pair(psi, a, b);
  s.near("complementarity.qubit.product", pair.product.real(), 0.5, 1e-12);
  s.near("complementarity.qubit.product_imag", pair.product.imag(), 0.0, 1e-12);
  s.row(2, complementarity_check(psi, a, b));

  const double t = std::numbers::pi / 8.0;
  const ProjectorWeakValuePair anomalous = projector_weak_value_pair(qubit(std::cos(t), -std::sin(t)), a, b);
  s.above("complementarity.anomaly.abs_wv_a", std::abs(anomalous.wv_a), 1.0);
  s.at_most("complementarity.anomaly.product", anomalous.product.real(), 1.0);

  const AnomalousDecomposition d = anomalous_decomposition(b, a, b);
  s.near("anomalous_decomposition.plus.mean", d.mean, 0.5, 1e-12);
  s.near("anomalous_decomposition.plus.spread", d.spread, 0.5, 1e-12);
  s.near("anomalous_decomposition.plus.reconstruction", std::abs(d.mean + d.anomalous - d.weak_value), 0.0, 1e-12);

  const CVGrid grid = CVGrid::build(512, -10.0, 10.0);
  const Vector gauss = gaussian_wavefunction(grid, 0.0, 1.0);
  const WindowProjector full_x = WindowProjector::full(grid, GridDomain::position);
  const WindowProjector full_p = WindowProjector::full(grid, GridDomain::momentum);
  const Complex wx = cv_weak_value(grid, gauss, full_x, {GridDomain::momentum, 0.0});
  const Complex wp = cv_weak_value(grid, gauss, full_p, {GridDomain::position, grid.x_samples()[256]});
  s.near("cv.full_window.position", std::abs(wx - 1.0), 0.0, 1e-8);
  s.near("cv.full_window.momentum", std::abs(wp - 1.0), 0.0, 1e-8);
  s.near("cv.full_window.product", std::abs(wx * wp - 1.0), 0.0, 1e-8);
  const WindowProjector half(grid, GridDomain::position, 5.0, 10.0);
  const Complex wh = cv_weak_value(grid, gauss, half, {GridDomain::momentum, 0.0});
  s.near("cv.half_line.symmetric_gaussian", wh.real(), 0.5, 1e-6);
}

void pointer_fixtures(Suite& s) {
  const double t = std::numbers::pi / 8.0;
  const Observable sz(pauli('z'));
  const PPSEnsemble ens(qubit(std::cos(t), std::sin(t)), qubit(1.0, -1.0));
  const CVGrid grid = CVGrid::build(256, -10.0, 10.0);
  const MeterSpec meter = MeterSpec::on_grid(grid, 1.0);
  const double g = 1e-3;
  const JointState joint = evolve_joint(ens.pre(), meter, sz, g);
  s.near("pointer.unitarity", joint.amplitudes.norm(), 1.0, 1e-12);
  const Complex wv = weak_value(ens, sz).value;
  const PostselectionResult post = postselect(joint, ens, wv, g, meter);
  const Complex est = estimate_weak_value(meter, post.pointer_unnormalized, g);
  s.near("pointer.anomalous_estimate", est.real(), 1.0 + std::numbers::sqrt2, 0.03);
  s.near("pointer.probability_first_order", post.probability, post.first_order_probability, 1e-4);
}

}  // namespace

ReportSet run_fixtures() {
  const auto start = std::chrono::steady_clock::now();
  Suite s;
  weak_value_fixtures(s);
  relation_fixtures(s);
  complementarity_fixtures(s);
  pointer_fixtures(s);

  ReportSet set;
  set.config = {{"suite", "fixtures"}};
  set.rows = std::move(s.rows_);
  set.checks = std::move(s.checks_);
  set.tolerance = kDefaultTolerances.relation;
  set.aggregates = compute_aggregates(set.rows, set.checks, set.tolerance, 0);
  set.timestamp = now_timestamp();
  set.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return set;
}

}  // namespace wm
