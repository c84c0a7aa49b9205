#include <numbers>

#include "support.hpp"
#include "weakmeas/pointer.hpp"
#include "weakmeas/studies.hpp"

using namespace wm;

namespace {

const double kT = std::numbers::pi / 8.0;

PPSEnsemble anomalous_ensemble() { return {test::qubit(std::cos(kT), std::sin(kT)), test::qubit(1, -1)}; }

MeterSpec qubit_meter(double hbar = 1.0) {
  return MeterSpec::finite(Observable(oracle::pauli_x()), StateVector::basis(2, 0), Observable(oracle::pauli_z()),
                           hbar);
}

double mean_position(const CVGrid& g, const Vector& amp) {
  return (amp.cwiseAbs2().transpose() * g.x_samples()).value() / amp.squaredNorm();
}

}  // namespace

TEST_SUITE("pointer") {
  TEST_CASE("zero coupling leaves the product state unchanged") {
    const StateVector psi = test::qubit(0.6, Complex(0, 0.8));
    const MeterSpec m = qubit_meter();
    const JointState j = evolve_joint(psi, m, Observable(oracle::pauli_z()), 0.0);
    CHECK((j.amplitudes - oracle::kron(psi.vec(), m.initial.vec())).norm() <= 1e-15);
  }

  TEST_CASE("joint evolution matches the dense exponential") {
    for (double hbar : {1.0, 0.7}) {
      const MeterSpec m = qubit_meter(hbar);
      const Matrix a = random_hermitian(2, Seed{21});
      const StateVector psi = haar_random_state(2, Seed{22});
      for (double g : {0.0, 0.01, 0.3, 2.0}) {
        const JointState j = evolve_joint(psi, m, Observable(a), g);
        const oracle::M h = oracle::kron(a, m.coupling.matrix());
        const oracle::V ref = oracle::expm(-oracle::I * (g / hbar) * h) * oracle::kron(psi.vec(), m.initial.vec());
        CHECK((j.amplitudes - ref).norm() <= 1e-12);
        CHECK(std::abs(j.amplitudes.norm() - 1.0) <= 1e-12);
      }
    }
  }

  TEST_CASE("identity observable translates the pointer") {
    const CVGrid g = CVGrid::build(256, -10.0, 10.0);
    const MeterSpec m = MeterSpec::on_grid(g, 1.0);
    const double before = mean_position(g, m.initial.vec());
    const JointState j = evolve_joint(StateVector::basis(2, 1), m, Observable(Matrix::Identity(2, 2)), 0.75);
    const Vector pointer = j.amplitudes.segment(m.dim(), m.dim());
    CHECK(std::abs(mean_position(g, pointer) - before - 0.75) <= 1e-8);
  }

  TEST_CASE("post-selection at zero coupling") {
    const PPSEnsemble e = anomalous_ensemble();
    const MeterSpec m = qubit_meter();
    const Observable sz(oracle::pauli_z());
    const JointState j = evolve_joint(e.pre(), m, sz, 0.0);
    const PostselectionResult r = postselect(j, e, weak_value(e, sz).value, 0.0, m);
    CHECK(std::abs(r.probability - e.overlap_k()) <= 1e-15);
    CHECK(std::abs(r.probability - r.pointer_unnormalized.squaredNorm()) <= 1e-15);
    CHECK(std::abs(r.first_order_probability - r.probability) <= 1e-15);
    CHECK((r.pointer_unnormalized - std::conj(e.overlap()) * m.initial.vec()).norm() <= 1e-15);
  }

  TEST_CASE("first-order pointer") {
    const MeterSpec m = MeterSpec::finite(Observable(oracle::pauli_z()), test::qubit(1, 1));
    CHECK(std::abs(first_order_pointer(m, 2.4, 0.3).norm() - 1.0) <= 1e-15);
    for (double hbar : {1.0, 2.0}) {
      const MeterSpec mh =
          MeterSpec::finite(Observable(oracle::pauli_z()), StateVector::basis(2, 0), std::nullopt, hbar);
      const Vector v = first_order_pointer(mh, Complex(0.0, 1.0), 0.4);
      CHECK(std::abs(v[0] - std::exp(0.4 / hbar)) <= 1e-14);
      const MeterSpec down =
          MeterSpec::finite(Observable(oracle::pauli_z()), StateVector::basis(2, 1), std::nullopt, hbar);
      CHECK(std::abs(first_order_pointer(down, Complex(0.0, 1.0), 0.4)[1] - std::exp(-0.4 / hbar)) <= 1e-14);
    }
  }

  TEST_CASE("first-order probability carries g over hbar") {
    // Kicked meter on a grid with hbar = 2; the correction 2 g Im<A>_w <M> / hbar
    // leaves a second-order residual, while dropping hbar leaves a first-order one.
    const double hbar = 2.0;
    const CVGrid grid = CVGrid::build(256, -10.0, 10.0, hbar);
    const MeterSpec m = MeterSpec::on_grid(grid, gaussian_wavefunction(grid, grid.center(GridDomain::position), 1.0, 1.0));
    const double mean_m = oracle::bra_ket(m.initial.vec(), m.coupling.matrix(), m.initial.vec()).real();
    CHECK(mean_m == doctest::Approx(1.0).epsilon(1e-8));

    const StateVector pre = test::qubit(std::cos(0.3), std::polar(std::sin(0.3), std::numbers::pi / 3.0));
    const PPSEnsemble e(pre, test::qubit(1, -1));
    const Observable sz(oracle::pauli_z());
    const Complex w = weak_value(e, sz).value;
    REQUIRE(std::abs(w.imag()) > 0.1);

    std::vector<double> gs{1e-2, 5e-3, 2.5e-3, 1.25e-3}, with_hbar, without_hbar;
    for (double g : gs) {
      const PostselectionResult r = postselect(evolve_joint(pre, m, sz, g), e, w, g, m);
      with_hbar.push_back(std::abs(r.probability - r.first_order_probability));
      const double alt = e.overlap_k() * (1.0 + 2.0 * g * w.imag() * mean_m);
      without_hbar.push_back(std::abs(r.probability - alt));
    }
    CHECK(log_log_slope(gs, with_hbar) == doctest::Approx(2.0).epsilon(0.05));
    CHECK(log_log_slope(gs, without_hbar) == doctest::Approx(1.0).epsilon(0.05));
  }

  TEST_CASE("estimator recovers weak values") {
    const CVGrid grid = CVGrid::build(256, -10.0, 10.0);
    const MeterSpec m = MeterSpec::on_grid(grid, 1.0);
    const Observable sz(oracle::pauli_z());
    const double g = 1e-3;

    const PPSEnsemble e = anomalous_ensemble();
    const Complex est = estimate_weak_value(m, postselect(evolve_joint(e.pre(), m, sz, g), e, 0.0, g, m).pointer_unnormalized, g);
    CHECK(std::abs(est - (1.0 + std::numbers::sqrt2)) <= 0.03);

    const StateVector psi = test::qubit(0.8, Complex(0.0, 0.6));
    const PPSEnsemble same(psi, psi);
    const Complex mean = oracle::bra_ket(psi.vec(), sz.matrix(), psi.vec());
    const Complex est_same =
        estimate_weak_value(m, postselect(evolve_joint(psi, m, sz, g), same, 0.0, g, m).pointer_unnormalized, g);
    CHECK(std::abs(est_same - mean) <= 1e-4);

    CHECK_ERROR_KIND(estimate_weak_value(m, m.initial.vec(), 0.0), ErrorKind::estimation_undefined);
    CHECK_ERROR_KIND(estimate_weak_value(m, Vector::Zero(m.dim()), g), ErrorKind::estimation_undefined);
    CHECK_ERROR_KIND(estimate_weak_value(m, Vector::Zero(3), g), ErrorKind::shape);
    const MeterSpec bare = MeterSpec::finite(Observable(oracle::pauli_x()), StateVector::basis(2, 0));
    CHECK_ERROR_KIND(estimate_weak_value(bare, bare.initial.vec(), g), ErrorKind::estimation_undefined);
  }

  TEST_CASE("estimator error order depends on the meter") {
    const std::vector<double> ladder{1e-2, 5e-3, 2.5e-3};
    const PointerStudy sym = run_pointer_study(PointerFixture::anomalous, ladder);
    const PointerStudy kicked = run_pointer_study(PointerFixture::complex_value, ladder);
    for (std::size_t i = 1; i < ladder.size(); ++i) {
      CHECK(sym.rows[i - 1].estimate_error / sym.rows[i].estimate_error == doctest::Approx(4.0).epsilon(0.1));
      CHECK(kicked.rows[i - 1].estimate_error / kicked.rows[i].estimate_error == doctest::Approx(2.0).epsilon(0.1));
    }
  }

  TEST_CASE("pointer study fixtures") {
    for (PointerFixture f : {PointerFixture::anomalous, PointerFixture::complex_value, PointerFixture::expectation}) {
      const PointerStudy s = run_pointer_study(f, {1e-2, 1e-3, 1e-4});
      CHECK(failure_count(s.checks) == 0);
      for (const auto& r : s.rows) CHECK(std::abs(r.norm - 1.0) <= 1e-12);
      CHECK(s.pointer_slope == doctest::Approx(2.0).epsilon(0.1));
      CHECK(pointer_fixture_from_string(to_string(f)) == f);
    }
    CHECK_ERROR_KIND(pointer_fixture_from_string("bogus"), ErrorKind::config);
  }

  TEST_CASE("least-squares slope") {
    CHECK(log_log_slope({1.0, 10.0, 100.0}, {3.0, 300.0, 30000.0}) == doctest::Approx(2.0));
    CHECK(std::isnan(log_log_slope({1.0}, {1.0})));
  }

  TEST_CASE("meter construction") {
    CHECK_ERROR_KIND(MeterSpec::finite(Observable(oracle::pauli_x()), StateVector::basis(3, 0)), ErrorKind::shape);
    CHECK_ERROR_KIND(evolve_joint(StateVector::basis(3, 0), qubit_meter(), Observable(oracle::pauli_z()), 0.1),
                     ErrorKind::shape);
  }
}
