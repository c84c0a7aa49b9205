#pragma once

#include <memory>
#include <string_view>

#include "weakmeas/linalg.hpp"

namespace wm {

enum class GridDomain { position, momentum };

std::string_view to_string(GridDomain d);

/// Uniform one-dimensional grid with its discrete Fourier dual.
///
/// Position samples sit at cell centres, x_j = x_min + (j + 1/2) dx with
/// dx = (x_max - x_min) / n, so a symmetric interval yields a sample set
/// symmetric about zero and every cell boundary x_min + j dx is a clean
/// window edge. Momentum samples are p_m = (m - n/2 + 1) dp with
/// dp = 2 pi hbar / (n dx), spanning (-pi hbar / dx, pi hbar / dx].
///
/// Wavefunctions are handled in two forms: sampled values psi(x_j), which
/// are normalized with the dx quadrature weight, and unit-norm amplitude
/// vectors psi(x_j) sqrt(dx). The transform acts on amplitudes:
///   F_{mj} = exp(-i p_m x_j / hbar) / sqrt(n),
/// which is the Riemann-sum realization of exp(-ipx/hbar)/sqrt(2 pi hbar).
class CVGrid {
 public:
  static CVGrid build(Eigen::Index n_points, double x_min, double x_max, double hbar = 1.0);

  Eigen::Index n_points() const noexcept { return n_; }
  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_max_; }
  double dx() const noexcept { return dx_; }
  double dp() const noexcept { return dp_; }
  double hbar() const noexcept { return hbar_; }
  const RealVector& x_samples() const noexcept { return x_; }
  const RealVector& p_samples() const noexcept { return p_; }
  const RealVector& samples(GridDomain d) const noexcept { return d == GridDomain::position ? x_ : p_; }
  double spacing(GridDomain d) const noexcept { return d == GridDomain::position ? dx_ : dp_; }
  double center(GridDomain d) const;

  /// Position-to-momentum change of basis on amplitude vectors.
  const Matrix& transform() const noexcept { return *transform_; }
  Vector to_momentum(const Vector& position_amplitudes) const;
  Vector to_position(const Vector& momentum_amplitudes) const;

  Vector amplitudes(const Vector& samples, GridDomain d) const;
  Vector sampled_values(const Vector& amplitudes, GridDomain d) const;

  /// Index of the sample at `coordinate`; errors if it is not a grid point.
  Eigen::Index index_of(GridDomain d, double coordinate) const;

  double unitarity_residual() const;

 private:
  Eigen::Index n_ = 0;
  double x_min_ = 0.0;
  double x_max_ = 0.0;
  double dx_ = 0.0;
  double dp_ = 0.0;
  double hbar_ = 1.0;
  RealVector x_;
  RealVector p_;
  std::shared_ptr<const Matrix> transform_;
};

/// Gaussian wave packet sampled on the position grid, exp(-(x-x0)^2/(4 sigma^2) + i p0 x / hbar),
/// normalized so that sum |psi|^2 dx = 1.
Vector gaussian_wavefunction(const CVGrid& grid, double center, double sigma, double momentum = 0.0);

/// Indicator of [center - width/2, center + width/2) on the samples of one
/// domain. Diagonal with 0/1 entries in its own basis.
class WindowProjector {
 public:
  WindowProjector(CVGrid grid, GridDomain domain, double center, double width);

  static WindowProjector full(const CVGrid& grid, GridDomain domain);

  const CVGrid& grid() const noexcept { return grid_; }
  GridDomain domain() const noexcept { return domain_; }
  double center() const noexcept { return center_; }
  double width() const noexcept { return width_; }
  const RealVector& indicator() const noexcept { return indicator_; }
  Eigen::Index rank() const noexcept { return rank_; }
  bool covers_grid() const noexcept { return rank_ == grid_.n_points(); }

  /// Diagonal matrix in the projector's own basis.
  Matrix matrix() const;
  /// The same projector expressed in the position basis.
  Matrix position_basis_matrix() const;
  /// Applies the projector to position-basis amplitudes.
  Vector apply(const Vector& position_amplitudes) const;

 private:
  CVGrid grid_;
  GridDomain domain_;
  double center_;
  double width_;
  RealVector indicator_;
  Eigen::Index rank_ = 0;
};

WindowProjector window_projector(const CVGrid& grid, GridDomain domain, double center, double width);

}  // namespace wm
