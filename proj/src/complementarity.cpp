#include "weakmeas/complementarity.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "weakmeas/errors.hpp"
#include "weakmeas/uncertainty.hpp"

namespace wm {

namespace {

struct PairAmplitudes {
  Complex psi_a;  // <a|psi>
  Complex psi_b;  // <b|psi>
  Complex ab;     // <a|b>
};

PairAmplitudes pair_amplitudes(const StateVector& psi, const StateVector& a, const StateVector& b,
                               const Tolerances& tol) {
  if (a.dim() != psi.dim() || b.dim() != psi.dim())
    throw Error(ErrorKind::shape, "projector pair: dimension mismatch");
  PairAmplitudes p{braket(a.vec(), psi.vec()), braket(b.vec(), psi.vec()), braket(a.vec(), b.vec())};
  if (!(std::abs(p.psi_a) > tol.overlap) || !(std::abs(p.psi_b) > tol.overlap))
    throw Error(ErrorKind::orthogonal_postselection, "projector pair: post-selection orthogonal to psi");
  return p;
}

}  // namespace

ProjectorWeakValuePair projector_weak_value_pair(const StateVector& psi, const StateVector& a,
                                                 const StateVector& b, const Tolerances& tol) {
  const auto p = pair_amplitudes(psi, a, b, tol);
  ProjectorWeakValuePair out;
  out.wv_a = std::conj(p.ab) * p.psi_a / p.psi_b;
  out.wv_b = p.ab * p.psi_b / p.psi_a;
  out.product = out.wv_a * out.wv_b;
  out.overlap_sq = std::norm(p.ab);
  return out;
}

std::pair<double, double> wavefunction_bridge_check(const StateVector& psi, const StateVector& a,
                                                    const StateVector& b, const Tolerances& tol) {
  const auto p = pair_amplitudes(psi, a, b, tol);
  const auto w = projector_weak_value_pair(psi, a, b, tol);
  return {std::abs(w.wv_a * p.psi_b - std::conj(p.ab) * p.psi_a), std::abs(w.wv_b * p.psi_a - p.ab * p.psi_b)};
}

AnomalousDecomposition anomalous_decomposition(const StateVector& psi, const StateVector& a,
                                               const StateVector& b, const Tolerances& tol) {
  const auto p = pair_amplitudes(psi, a, b, tol);
  const Matrix proj_a = a.vec() * a.vec().adjoint();
  const VaidmanParts parts = vaidman_decompose(psi, proj_a, tol);

  AnomalousDecomposition d;
  d.mean = parts.mean.real();
  d.spread = parts.spread;
  d.anomalous = parts.orthogonal_state
                    ? parts.spread * braket(b.vec(), parts.orthogonal_state->vec()) / p.psi_b
                    : Complex{0.0, 0.0};
  d.weak_value = projector_weak_value_pair(psi, a, b, tol).wv_a;
  return d;
}

RelationReport complementarity_check(const StateVector& psi, const StateVector& a, const StateVector& b,
                                     const Tolerances& tol) {
  const auto w = projector_weak_value_pair(psi, a, b, tol);
  RelationReport r;
  r.relation = RelationId::complementarity;
  r.lhs = 1.0;
  r.rhs_terms = {{"product", w.product.real()}};
  r.rhs_total = w.product.real();
  r.slack = r.lhs - r.rhs_total;
  r.tight = std::abs(r.slack) <= tol.relation;
  r.imag_residue = std::abs(w.product.imag());
  r.fingerprints = {{"state", psi.fingerprint()}, {"a", a.fingerprint()}, {"b", b.fingerprint()}};
  r.diagnostics = {{"overlap_sq", w.overlap_sq},
                   {"product_deviation", std::abs(w.product - w.overlap_sq)},
                   {"abs_wv_a", std::abs(w.wv_a)},
                   {"abs_wv_b", std::abs(w.wv_b)}};
  return r;
}

Complex cv_weak_value(const CVGrid& grid, const Vector& psi_on_grid, const WindowProjector& window,
                      const GridPoint& postselect, const Tolerances& tol) {
  if (psi_on_grid.size() != grid.n_points() || window.grid().n_points() != grid.n_points())
    throw Error(ErrorKind::shape, "cv_weak_value: grid size mismatch");
  if (postselect.domain == window.domain())
    throw Error(ErrorKind::invalid_parameter, "cv_weak_value: post-selection must be in the conjugate domain");
  const Vector c = grid.amplitudes(psi_on_grid, GridDomain::position);
  const double defect = std::abs(c.norm() - 1.0);
  if (defect > tol.spectral)
    throw Error(ErrorKind::contract_violation, "cv_weak_value: wavefunction not normalized under the dx weight");

  const Eigen::Index idx = grid.index_of(postselect.domain, postselect.coordinate);
  const Matrix& f = grid.transform();
  const RealVector& ind = window.indicator();
  Complex num{0.0, 0.0};
  Complex den{0.0, 0.0};
  if (window.domain() == GridDomain::position) {
    // <p_m|Pi|psi> = sum over window of F_{mj} c_j
    for (Eigen::Index j = 0; j < c.size(); ++j) {
      const Complex term = f(idx, j) * c[j];
      den += term;
      if (ind[j] != 0.0) num += term;
    }
  } else {
    // <x_j|Pi|psi> = sum over window of conj(F_{mj}) d_m with d = F c
    const Vector d = f * c;
    for (Eigen::Index m = 0; m < d.size(); ++m)
      if (ind[m] != 0.0) num += std::conj(f(m, idx)) * d[m];
    den = c[idx];
  }
  if (!(std::abs(den) > tol.overlap))
    throw Error(ErrorKind::orthogonal_postselection, "cv_weak_value: post-selected amplitude vanishes");
  return num / den;
}

CVProductTable cv_product_study(const CVGrid& grid, const Vector& psi_on_grid,
                                const std::vector<double>& x_window_widths,
                                const std::vector<double>& p_window_widths, double x_post, double p_post,
                                const Tolerances& tol) {
  return cv_product_study(grid, psi_on_grid, x_window_widths, p_window_widths, x_post, p_post,
                          grid.center(GridDomain::position), grid.center(GridDomain::momentum), tol);
}

CVProductTable cv_product_study(const CVGrid& grid, const Vector& psi_on_grid,
                                const std::vector<double>& x_window_widths,
                                const std::vector<double>& p_window_widths, double x_post, double p_post,
                                double x_center, double p_center, const Tolerances& tol) {
  CVProductTable table;
  const GridPoint p_point{GridDomain::momentum, p_post};
  const GridPoint x_point{GridDomain::position, x_post};
  for (double wx : x_window_widths) {
    const WindowProjector xw(grid, GridDomain::position, x_center, wx);
    const Complex wv_x = cv_weak_value(grid, psi_on_grid, xw, p_point, tol);
    for (double wp : p_window_widths) {
      const WindowProjector pw(grid, GridDomain::momentum, p_center, wp);
      CVProductRow row;
      row.x_width = wx;
      row.p_width = wp;
      row.wv_x = wv_x;
      row.wv_p = cv_weak_value(grid, psi_on_grid, pw, x_point, tol);
      row.product = row.wv_x * row.wv_p;
      row.deviation = std::abs(row.product - 1.0);
      row.both_full = xw.covers_grid() && pw.covers_grid();
      table.rows.push_back(row);
    }
  }
  table.notes.push_back(
      "products are expected to equal 1 only when both windows cover the grid; finite-window products are "
      "recorded, not asserted");
  return table;
}

CVStateKind cv_state_from_string(std::string_view s) {
  if (s == "gaussian") return CVStateKind::gaussian;
  if (s == "boosted") return CVStateKind::boosted;
  if (s == "two-peak") return CVStateKind::two_peak;
  throw Error(ErrorKind::config, "unknown CV state '" + std::string(s) + "'");
}

std::string_view to_string(CVStateKind k) {
  switch (k) {
    case CVStateKind::gaussian: return "gaussian";
    case CVStateKind::boosted: return "boosted";
    case CVStateKind::two_peak: return "two-peak";
  }
  return "unknown";
}

Vector make_cv_state(const CVGrid& grid, CVStateKind kind) {
  const double c = grid.center(GridDomain::position);
  switch (kind) {
    case CVStateKind::gaussian: return gaussian_wavefunction(grid, c, 1.0);
    case CVStateKind::boosted: return gaussian_wavefunction(grid, c, 1.0, 1.0);
    case CVStateKind::two_peak: {
      Vector v = gaussian_wavefunction(grid, c - 2.0, 1.0) + gaussian_wavefunction(grid, c + 2.0, 1.0);
      return v / std::sqrt(v.squaredNorm() * grid.dx());
    }
  }
  throw Error(ErrorKind::invalid_parameter, "unknown CV state kind");
}

std::vector<RefinementStep> cv_refinement_study(const std::vector<Eigen::Index>& grid_sizes, double x_min,
                                                double x_max, double hbar, CVStateKind state,
                                                double window_center, double window_width, double p_post,
                                                const Tolerances& tol) {
  std::vector<RefinementStep> steps;
  for (Eigen::Index n : grid_sizes) {
    const CVGrid grid = CVGrid::build(n, x_min, x_max, hbar);
    const Vector psi = make_cv_state(grid, state);
    const WindowProjector w(grid, GridDomain::position, window_center, window_width);
    steps.push_back({n, cv_weak_value(grid, psi, w, {GridDomain::momentum, p_post}, tol)});
  }
  return steps;
}

}  // namespace wm
