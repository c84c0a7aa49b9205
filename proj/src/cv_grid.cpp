#include "weakmeas/cv_grid.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "weakmeas/errors.hpp"

namespace wm {

std::string_view to_string(GridDomain d) { return d == GridDomain::position ? "position" : "momentum"; }

CVGrid CVGrid::build(Eigen::Index n_points, double x_min, double x_max, double hbar) {
  if (n_points < 16 || (n_points & (n_points - 1)) != 0)
    throw Error(ErrorKind::invalid_parameter, "grid size must be a power of two >= 16");
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min))
    throw Error(ErrorKind::invalid_parameter, "grid interval must satisfy x_max > x_min");
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw Error(ErrorKind::invalid_parameter, "hbar must be positive");

  CVGrid g;
  g.n_ = n_points;
  g.x_min_ = x_min;
  g.x_max_ = x_max;
  g.hbar_ = hbar;
  g.dx_ = (x_max - x_min) / static_cast<double>(n_points);
  g.dp_ = 2.0 * M_PI * hbar / (static_cast<double>(n_points) * g.dx_);
  g.x_.resize(n_points);
  g.p_.resize(n_points);
  const Eigen::Index half = n_points / 2;
  for (Eigen::Index j = 0; j < n_points; ++j) {
    g.x_[j] = x_min + (static_cast<double>(j) + 0.5) * g.dx_;
    g.p_[j] = static_cast<double>(j - half + 1) * g.dp_;
  }

  auto f = std::make_shared<Matrix>(n_points, n_points);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n_points));
  for (Eigen::Index j = 0; j < n_points; ++j)
    for (Eigen::Index m = 0; m < n_points; ++m)
      (*f)(m, j) = std::polar(norm, -g.p_[m] * g.x_[j] / hbar);
  g.transform_ = std::move(f);
  return g;
}

double CVGrid::center(GridDomain d) const {
  const RealVector& s = samples(d);
  return 0.5 * (s[0] + s[s.size() - 1]);
}

Vector CVGrid::to_momentum(const Vector& position_amplitudes) const {
  if (position_amplitudes.size() != n_) throw Error(ErrorKind::shape, "to_momentum: size mismatch");
  return transform() * position_amplitudes;
}

Vector CVGrid::to_position(const Vector& momentum_amplitudes) const {
  if (momentum_amplitudes.size() != n_) throw Error(ErrorKind::shape, "to_position: size mismatch");
  return transform().adjoint() * momentum_amplitudes;
}

Vector CVGrid::amplitudes(const Vector& samples, GridDomain d) const {
  if (samples.size() != n_) throw Error(ErrorKind::shape, "amplitudes: size mismatch");
  return samples * std::sqrt(spacing(d));
}

Vector CVGrid::sampled_values(const Vector& amplitudes, GridDomain d) const {
  if (amplitudes.size() != n_) throw Error(ErrorKind::shape, "sampled_values: size mismatch");
  return amplitudes / std::sqrt(spacing(d));
}

Eigen::Index CVGrid::index_of(GridDomain d, double coordinate) const {
  const RealVector& s = samples(d);
  Eigen::Index best = 0;
  (s.array() - coordinate).abs().minCoeff(&best);
  if (std::abs(s[best] - coordinate) > 1e-9 * spacing(d))
    throw Error(ErrorKind::invalid_parameter, std::string(to_string(d)) + " coordinate " +
                                                  std::to_string(coordinate) + " is not a grid sample");
  return best;
}

double CVGrid::unitarity_residual() const {
  const Matrix& f = transform();
  return (f.adjoint() * f - Matrix::Identity(n_, n_)).cwiseAbs().maxCoeff();
}

Vector gaussian_wavefunction(const CVGrid& grid, double center, double sigma, double momentum) {
  if (!(sigma > 0.0)) throw Error(ErrorKind::invalid_parameter, "gaussian width must be positive");
  const RealVector& x = grid.x_samples();
  Vector psi(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double u = x[j] - center;
    psi[j] = std::polar(std::exp(-u * u / (4.0 * sigma * sigma)), momentum * x[j] / grid.hbar());
  }
  const double norm = std::sqrt(psi.squaredNorm() * grid.dx());
  return psi / norm;
}

WindowProjector::WindowProjector(CVGrid grid, GridDomain domain, double center, double width)
    : grid_(std::move(grid)), domain_(domain), center_(center), width_(width) {
  if (std::isnan(center) || std::isnan(width) || !(width > 0.0))
    throw Error(ErrorKind::invalid_parameter, "window width must be positive");
  const RealVector& s = grid_.samples(domain_);
  const double lo = center - 0.5 * width;
  const double hi = center + 0.5 * width;
  indicator_ = RealVector::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] >= lo && s[i] < hi) {
      indicator_[i] = 1.0;
      ++rank_;
    }
  }
  if (rank_ == 0) throw Error(ErrorKind::invalid_parameter, "window contains no grid sample");
}

WindowProjector WindowProjector::full(const CVGrid& grid, GridDomain domain) {
  return WindowProjector(grid, domain, grid.center(domain), std::numeric_limits<double>::infinity());
}

Matrix WindowProjector::matrix() const { return indicator_.cast<Complex>().asDiagonal(); }

Matrix WindowProjector::position_basis_matrix() const {
  if (domain_ == GridDomain::position) return matrix();
  const Matrix& f = grid_.transform();
  return f.adjoint() * indicator_.cast<Complex>().asDiagonal() * f;
}

Vector WindowProjector::apply(const Vector& position_amplitudes) const {
  if (domain_ == GridDomain::position) return indicator_.cast<Complex>().cwiseProduct(position_amplitudes);
  return grid_.to_position(indicator_.cast<Complex>().cwiseProduct(grid_.to_momentum(position_amplitudes)));
}

WindowProjector window_projector(const CVGrid& grid, GridDomain domain, double center, double width) {
  return WindowProjector(grid, domain, center, width);
}

}  // namespace wm
