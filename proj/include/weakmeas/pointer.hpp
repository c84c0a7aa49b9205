#pragma once

#include <optional>

#include "weakmeas/cv_grid.hpp"
#include "weakmeas/quantum_model.hpp"

namespace wm {

/// The measuring device: coupling observable M, initial pointer state Phi and
/// (optionally) the readout observable paired with M.
struct MeterSpec {
  Observable coupling;
  StateVector initial;
  std::optional<Observable> conjugate;
  double hbar = 1.0;
  std::optional<CVGrid> grid;

  Eigen::Index dim() const noexcept { return initial.dim(); }

  static MeterSpec finite(Observable coupling, StateVector initial, std::optional<Observable> conjugate = {},
                          double hbar = 1.0);

  /// Pointer on a position grid: Phi is a Gaussian of width sigma at the
  /// grid centre (or the supplied sampled wavefunction), M is momentum and
  /// the readout is position. Meter vectors are position-basis amplitudes.
  static MeterSpec on_grid(const CVGrid& grid, double sigma = 1.0);
  static MeterSpec on_grid(const CVGrid& grid, const Vector& psi_on_grid);
};

/// System (x) meter amplitudes; entry s * meter_dim + m.
struct JointState {
  Vector amplitudes;
  Eigen::Index system_dim = 0;
  Eigen::Index meter_dim = 0;
};

/// exp(-(i/hbar) g A (x) M)|psi>|Phi> = sum_a Pi_a psi (x) exp(-(i/hbar) g a M) Phi.
JointState evolve_joint(const StateVector& psi, const MeterSpec& meter, const Observable& a, double g);

struct PostselectionResult {
  Vector pointer_unnormalized;  // (<phi| (x) 1)|joint>
  double probability = 0.0;
  double first_order_probability = 0.0;  // k (1 + 2 g Im<A>_w <M> / hbar)
};

PostselectionResult postselect(const JointState& joint, const PPSEnsemble& ens, Complex weak_value, double g,
                               const MeterSpec& meter);

/// exp(-(i/hbar) g <A>_w M)|Phi>; not unitary when the weak value is complex.
Vector first_order_pointer(const MeterSpec& meter, Complex weak_value, double g);

/// Infers the weak value from the post-selected pointer. The shifts of
/// <conjugate> and <M> relative to Phi are mapped back through a 2x2
/// response matrix measured by applying first_order_pointer with weak
/// values 1 and i at the same g.
Complex estimate_weak_value(const MeterSpec& meter, const Vector& pointer_post, double g);

}  // namespace wm
