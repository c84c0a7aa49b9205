#include <numbers>

#include "support.hpp"
#include "weakmeas/quantum_model.hpp"
#include "weakmeas/random.hpp"

using namespace wm;

namespace {

const StateVector kZero = StateVector::basis(2, 0);
const StateVector kPlus = test::qubit(1, 1);

}  // namespace

TEST_SUITE("quantum_model") {
  TEST_CASE("qubit weak values") {
    const Observable sz(oracle::pauli_z());
    // sigma_z|0> = |0>, so <+|sz|0>/<+|0> = 1.
    const WeakValue w = weak_value(PPSEnsemble(kZero, kPlus), sz);
    CHECK(std::abs(w.value - Complex(1.0, 0.0)) <= 1e-15);
    CHECK(w.observable == sz.fingerprint());

    const double t = std::numbers::pi / 8.0;
    const PPSEnsemble anomalous(test::qubit(std::cos(t), std::sin(t)), test::qubit(1, -1));
    const double expected = (std::cos(t) + std::sin(t)) / (std::cos(t) - std::sin(t));
    CHECK(expected == doctest::Approx(1.0 + std::numbers::sqrt2).epsilon(1e-14));
    const Complex v = weak_value(anomalous, sz).value;
    CHECK(std::abs(v - expected) <= 1e-13);
    CHECK(std::abs(v.real()) > sz.spectrum().eigenvalues.cwiseAbs().maxCoeff());
  }

  TEST_CASE("equal pre- and post-selection gives the expectation value") {
    for (int dim = 2; dim <= 6; ++dim) {
      const StateVector psi = haar_random_state(dim, Seed{static_cast<std::uint64_t>(dim)});
      const Observable a(random_hermitian(dim, Seed{static_cast<std::uint64_t>(50 + dim)}));
      const Complex mean = oracle::bra_ket(psi.vec(), a.matrix(), psi.vec());
      CHECK(std::abs(weak_value(PPSEnsemble(psi, psi), a).value - mean) <= 1e-13);
    }
  }

  TEST_CASE("ensemble construction") {
    CHECK_ERROR_KIND(PPSEnsemble(kZero, StateVector::basis(2, 1)), ErrorKind::orthogonal_postselection);
    CHECK_ERROR_KIND(PPSEnsemble(kZero, StateVector::basis(3, 0)), ErrorKind::shape);
    const PPSEnsemble e(kZero, kPlus);
    CHECK(e.overlap_k() == doctest::Approx(0.5));
    CHECK(std::abs(e.overlap() - Complex(1.0 / std::sqrt(2.0), 0.0)) <= 1e-15);
    CHECK_ERROR_KIND(weak_value(e, Observable(Matrix::Identity(3, 3))), ErrorKind::shape);
  }

  TEST_CASE("qubit weak operator against the explicit product") {
    const PPSEnsemble e(kZero, kPlus);
    const WeakOperator w = weak_operator(e, Observable(oracle::pauli_z()));
    // |+><+| sz / (1/2) = [[1, -1], [1, -1]].
    Matrix expected(2, 2);
    expected << 1, -1, 1, -1;
    CHECK(test::max_abs(w.matrix - expected) <= 1e-15);
    CHECK(std::abs(oracle::bra_ket(kZero.vec(), w.matrix, kZero.vec()) - 1.0) <= 1e-15);

    const Matrix adj = adjoint_weak_operator(w);
    CHECK(std::abs(oracle::bra_ket(kZero.vec(), adj, kZero.vec()) - std::conj(Complex(1.0, 0.0))) <= 1e-15);
    CHECK(adj.adjoint() == w.matrix);
  }

  TEST_CASE("identity observable") {
    const PPSEnsemble e(haar_random_state(4, Seed{1}), haar_random_state(4, Seed{2}));
    const WeakOperator w = weak_operator(e, Observable(Matrix::Identity(4, 4)));
    const Vector& phi = e.post().vec();
    CHECK(test::max_abs(w.matrix - phi * phi.adjoint() / e.overlap_k()) <= 1e-13);
    CHECK(std::abs(weak_value(e, w.parent).value - 1.0) <= 1e-14);
  }

  TEST_CASE("adjoint expectation is the conjugate weak value") {
    const PPSEnsemble e(haar_random_state(5, Seed{3}), haar_random_state(5, Seed{4}));
    const WeakOperator w = weak_operator(e, Observable(random_hermitian(5, Seed{5})));
    const Complex wv = weak_value(e, w.parent).value;
    const Vector& psi = e.pre().vec();
    CHECK(std::abs(oracle::bra_ket(psi, adjoint_weak_operator(w), psi) - std::conj(wv)) <=
          1e-12 * std::max(1.0, std::abs(wv)));
  }

  TEST_CASE("defining identities over random ensembles") {
    for (int dim = 2; dim <= 8; ++dim) {
      Rng rng(Seed{static_cast<std::uint64_t>(1000 + dim)});
      for (int t = 0; t < 100; ++t) {
        const PPSEnsemble e(rng.haar_state(dim), rng.haar_state(dim));
        const Observable a(rng.hermitian(dim, 1.0));
        const WeakOperator w = weak_operator(e, a);
        const WeakOperatorResiduals r = weak_operator_residuals(w);
        CHECK(r.mean_relative <= 1e-12);
        CHECK(r.pre_action <= 1e-10);
        CHECK(r.post_action <= 1e-10);
        CHECK(r.outer_product <= 1e-12);

        // Independent statement of the weak value and of the explicit outer product.
        const oracle::V& psi = e.pre().vec();
        const oracle::V& phi = e.post().vec();
        const Complex ref = oracle::bra_ket(phi, a.matrix(), psi) / oracle::bra_ket(phi, psi);
        CHECK(std::abs(weak_value(e, a).value - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
        const oracle::M ref_w = oracle::weak_operator(psi, phi, a.matrix());
        CHECK(test::max_abs(w.matrix - ref_w) <= 1e-12 * std::max(1.0, test::max_abs(ref_w)));
      }
    }
  }

  TEST_CASE("pre-selected action uses the conjugate of the printed overlap") {
    // A_w psi = <A>_w phi <phi|psi> / k = <A>_w phi / <psi|phi>.
    Rng rng(Seed{77});
    const PPSEnsemble e(rng.haar_state(3), rng.haar_state(3));
    REQUIRE(std::abs(e.overlap().imag()) > 1e-3);
    const WeakOperator w = weak_operator(e, Observable(rng.hermitian(3, 1.0)));
    const Complex wv = weak_value(e, w.parent).value;
    const Vector lhs = w.matrix * e.pre().vec();
    const Complex psi_phi = oracle::bra_ket(e.pre().vec(), e.post().vec());
    CHECK((lhs - wv / psi_phi * e.post().vec()).norm() <= 1e-12 * lhs.norm());
    CHECK((lhs - wv / std::conj(psi_phi) * e.post().vec()).norm() > 1e-3 * lhs.norm());
  }

  TEST_CASE("weak values are linear") {
    const PPSEnsemble e(haar_random_state(4, Seed{8}), haar_random_state(4, Seed{9}));
    const Matrix a = random_hermitian(4, Seed{10}), b = random_hermitian(4, Seed{11});
    const double alpha = 0.7, beta = -2.3;
    const Complex lhs = weak_value(e, Observable(alpha * a + beta * b)).value;
    const Complex rhs = alpha * weak_value(e, Observable(a)).value + beta * weak_value(e, Observable(b)).value;
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)));
  }

  TEST_CASE("spectral projectors resolve the identity") {
    Matrix d = Matrix::Zero(4, 4);
    d.diagonal() << 1.0, 1.0, -2.0, 3.0;
    const Matrix u = Eigen::HouseholderQR<Matrix>(random_hermitian(4, Seed{12})).householderQ();
    const Observable o(u * d * u.adjoint());
    const auto projectors = o.projectors();
    CHECK(projectors.size() == 3);
    Matrix sum = Matrix::Zero(4, 4);
    for (const auto& [value, p] : projectors) {
      CHECK(test::max_abs(p * p - p) <= 1e-10);
      sum += p;
    }
    CHECK(test::max_abs(sum - Matrix::Identity(4, 4)) <= 1e-10);
  }

  TEST_CASE("exponential through the eigenbasis matches the dense oracle") {
    const Observable o(random_hermitian(4, Seed{13}));
    const Vector v = haar_random_state(4, Seed{14}).vec();
    const Complex theta(0.3, -0.05);
    const Vector ref = oracle::expm(-oracle::I * theta * o.matrix()) * v;
    CHECK((o.apply_exponential(theta, v) - ref).norm() <= 1e-12);
  }
}
