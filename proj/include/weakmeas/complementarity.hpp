#pragma once

#include <string>
#include <utility>
#include <vector>

#include "weakmeas/cv_grid.hpp"
#include "weakmeas/linalg.hpp"
#include "weakmeas/relation_report.hpp"

namespace wm {

/// Weak values of |a><a| post-selected on |b> and of |b><b| post-selected
/// on |a>, for one pre-selected state.
struct ProjectorWeakValuePair {
  Complex wv_a;  // <b|a><a|psi> / <b|psi>
  Complex wv_b;  // <a|b><b|psi> / <a|psi>
  Complex product;
  double overlap_sq = 0.0;  // |<a|b>|^2
};

ProjectorWeakValuePair projector_weak_value_pair(const StateVector& psi, const StateVector& a,
                                                 const StateVector& b,
                                                 const Tolerances& tol = kDefaultTolerances);

/// |<Pi_a>_w psi(b) - <b|a> psi(a)| and |<Pi_b>_w psi(a) - <a|b> psi(b)|.
std::pair<double, double> wavefunction_bridge_check(const StateVector& psi, const StateVector& a,
                                                    const StateVector& b,
                                                    const Tolerances& tol = kDefaultTolerances);

/// <Pi_a>_w = |psi(a)|^2 + spread <b|psibar_a> / <b|psi>.
struct AnomalousDecomposition {
  double mean = 0.0;
  Complex anomalous;
  double spread = 0.0;
  Complex weak_value;  // the directly computed <Pi_a>_w, for comparison
};

AnomalousDecomposition anomalous_decomposition(const StateVector& psi, const StateVector& a,
                                               const StateVector& b,
                                               const Tolerances& tol = kDefaultTolerances);

/// The product bound as a report: lhs = 1, rhs = Re(product).
RelationReport complementarity_check(const StateVector& psi, const StateVector& a, const StateVector& b,
                                     const Tolerances& tol = kDefaultTolerances);

// Continuous-variable forms on a CVGrid.

/// Post-selection on a single grid sample of the domain conjugate to the window.
struct GridPoint {
  GridDomain domain = GridDomain::momentum;
  double coordinate = 0.0;
};

/// <post|Pi|psi> / <post|psi> for a window projector, with psi given as
/// sampled values normalized under the dx weight.
Complex cv_weak_value(const CVGrid& grid, const Vector& psi_on_grid, const WindowProjector& window,
                      const GridPoint& postselect, const Tolerances& tol = kDefaultTolerances);

struct CVProductRow {
  double x_width = 0.0;
  double p_width = 0.0;
  Complex wv_x;  // position window, momentum post-selection
  Complex wv_p;  // momentum window, position post-selection
  Complex product;
  double deviation = 0.0;  // |product - 1|
  bool both_full = false;
};

struct CVProductTable {
  std::vector<CVProductRow> rows;
  std::vector<std::string> notes;
};

/// Products of the two window weak values for every (x width, p width)
/// pair. Infinite widths select the full grid. Windows are centred on the
/// grid centre of their domain unless centres are given.
CVProductTable cv_product_study(const CVGrid& grid, const Vector& psi_on_grid,
                                const std::vector<double>& x_window_widths,
                                const std::vector<double>& p_window_widths, double x_post, double p_post,
                                const Tolerances& tol = kDefaultTolerances);
CVProductTable cv_product_study(const CVGrid& grid, const Vector& psi_on_grid,
                                const std::vector<double>& x_window_widths,
                                const std::vector<double>& p_window_widths, double x_post, double p_post,
                                double x_center, double p_center, const Tolerances& tol = kDefaultTolerances);

enum class CVStateKind { gaussian, boosted, two_peak };

CVStateKind cv_state_from_string(std::string_view s);
std::string_view to_string(CVStateKind k);

/// Test states: unit-width Gaussian at the grid centre, the same with a unit
/// momentum kick, and an even superposition of two such packets at +-2.
Vector make_cv_state(const CVGrid& grid, CVStateKind kind);

/// Position-window weak value (post-selected at p = p_post) on a sequence
/// of grids over the same interval, one entry per grid size.
struct RefinementStep {
  Eigen::Index n_points = 0;
  Complex value;
};

std::vector<RefinementStep> cv_refinement_study(const std::vector<Eigen::Index>& grid_sizes, double x_min,
                                                double x_max, double hbar, CVStateKind state,
                                                double window_center, double window_width, double p_post = 0.0,
                                                const Tolerances& tol = kDefaultTolerances);

}  // namespace wm
