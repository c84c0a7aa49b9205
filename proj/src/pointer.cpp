#include "weakmeas/pointer.hpp"

#include <cmath>
#include <limits>

#include "weakmeas/errors.hpp"

namespace wm {

namespace {

double expectation(const Observable& o, const Vector& v) {
  return braket(v, o.matrix(), v).real() / v.squaredNorm();
}

Eigen::Vector2d readout_shift(const MeterSpec& meter, const Vector& pointer) {
  const Vector& phi0 = meter.initial.vec();
  return {expectation(*meter.conjugate, pointer) - expectation(*meter.conjugate, phi0),
          expectation(meter.coupling, pointer) - expectation(meter.coupling, phi0)};
}

}  // namespace

MeterSpec MeterSpec::finite(Observable coupling, StateVector initial, std::optional<Observable> conjugate,
                            double hbar) {
  if (coupling.dim() != initial.dim() || (conjugate && conjugate->dim() != initial.dim()))
    throw Error(ErrorKind::shape, "meter observables and pointer state disagree in dimension");
  if (!(hbar > 0.0)) throw Error(ErrorKind::invalid_parameter, "hbar must be positive");
  return MeterSpec{std::move(coupling), std::move(initial), std::move(conjugate), hbar, std::nullopt};
}

MeterSpec MeterSpec::on_grid(const CVGrid& grid, double sigma) {
  return on_grid(grid, gaussian_wavefunction(grid, grid.center(GridDomain::position), sigma));
}

MeterSpec MeterSpec::on_grid(const CVGrid& grid, const Vector& psi_on_grid) {
  const Eigen::Index n = grid.n_points();
  // Momentum eigenvectors in the position basis are the rows of F, conjugated.
  Observable momentum = Observable::from_spectrum(grid.p_samples(), grid.transform().adjoint());
  Observable position = Observable::from_spectrum(grid.x_samples(), Matrix::Identity(n, n));
  StateVector phi = StateVector::normalized(grid.amplitudes(psi_on_grid, GridDomain::position));
  return MeterSpec{std::move(momentum), std::move(phi), std::move(position), grid.hbar(), grid};
}

JointState evolve_joint(const StateVector& psi, const MeterSpec& meter, const Observable& a, double g) {
  if (psi.dim() != a.dim()) throw Error(ErrorKind::shape, "evolve_joint: system dimension mismatch");
  if (!std::isfinite(g)) throw Error(ErrorKind::invalid_parameter, "evolve_joint: coupling must be finite");
  const Eigen::Index ns = psi.dim();
  const Eigen::Index nm = meter.dim();
  JointState joint{Vector::Zero(ns * nm), ns, nm};
  for (const auto& [value, proj] : a.projectors()) {
    const Vector sys = proj * psi.vec();
    const Vector kicked = meter.coupling.apply_exponential(g * value / meter.hbar, meter.initial.vec());
    for (Eigen::Index s = 0; s < ns; ++s) joint.amplitudes.segment(s * nm, nm) += sys[s] * kicked;
  }
  return joint;
}

PostselectionResult postselect(const JointState& joint, const PPSEnsemble& ens, Complex weak_value, double g,
                               const MeterSpec& meter) {
  const Vector& phi = ens.post().vec();
  if (phi.size() != joint.system_dim || meter.dim() != joint.meter_dim)
    throw Error(ErrorKind::shape, "postselect: dimension mismatch");
  PostselectionResult r;
  r.pointer_unnormalized = Vector::Zero(joint.meter_dim);
  for (Eigen::Index s = 0; s < joint.system_dim; ++s)
    r.pointer_unnormalized += std::conj(phi[s]) * joint.amplitudes.segment(s * joint.meter_dim, joint.meter_dim);
  r.probability = r.pointer_unnormalized.squaredNorm();
  const double mean_m = braket(meter.initial.vec(), meter.coupling.matrix(), meter.initial.vec()).real();
  r.first_order_probability = ens.overlap_k() * (1.0 + 2.0 * g * weak_value.imag() * mean_m / meter.hbar);
  return r;
}

Vector first_order_pointer(const MeterSpec& meter, Complex weak_value, double g) {
  return meter.coupling.apply_exponential(g * weak_value / meter.hbar, meter.initial.vec());
}

Complex estimate_weak_value(const MeterSpec& meter, const Vector& pointer_post, double g) {
  if (!meter.conjugate)
    throw Error(ErrorKind::estimation_undefined, "estimate_weak_value: meter has no readout observable");
  if (pointer_post.size() != meter.dim()) throw Error(ErrorKind::shape, "estimate_weak_value: size mismatch");
  const double prob = pointer_post.squaredNorm();
  if (!(prob > std::numeric_limits<double>::min()) || !std::isfinite(prob))
    throw Error(ErrorKind::estimation_undefined, "estimate_weak_value: post-selection has zero probability");
  if (g == 0.0) throw Error(ErrorKind::estimation_undefined, "estimate_weak_value: zero coupling");

  Eigen::Matrix2d response;
  response.col(0) = readout_shift(meter, first_order_pointer(meter, {1.0, 0.0}, g));
  response.col(1) = readout_shift(meter, first_order_pointer(meter, {0.0, 1.0}, g));
  const Eigen::FullPivLU<Eigen::Matrix2d> lu(response);
  if (!lu.isInvertible())
    throw Error(ErrorKind::estimation_undefined, "estimate_weak_value: meter response is singular");
  const Eigen::Vector2d w = lu.solve(readout_shift(meter, pointer_post));
  return {w[0], w[1]};
}

}  // namespace wm
