#include "weakmeas/random.hpp"

#include <cmath>

#include "weakmeas/errors.hpp"

namespace wm {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Seed derive_seed(Seed master, std::uint64_t stream, std::uint64_t index) {
  return Seed{splitmix64(splitmix64(master.value ^ splitmix64(stream)) + index)};
}

Complex Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * M_SQRT1_2, im * M_SQRT1_2};
}

StateVector Rng::haar_state(Eigen::Index dim) {
  if (dim < 1) throw Error(ErrorKind::invalid_dimension, "haar_random_state: dim must be >= 1");
  Vector v(dim);
  for (auto& z : v) z = complex_normal();
  return StateVector::normalized(v);
}

Matrix Rng::complex_gaussian(Eigen::Index rows, Eigen::Index cols) {
  Matrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = complex_normal();
  return g;
}

Matrix Rng::hermitian(Eigen::Index dim, double scale) {
  if (dim < 1) throw Error(ErrorKind::invalid_dimension, "random_hermitian: dim must be >= 1");
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw Error(ErrorKind::invalid_parameter, "random_hermitian: scale must be positive");
  const Matrix g = complex_gaussian(dim, dim);
  Matrix h = scale * 0.5 * (g + g.adjoint());
  // Exact symmetry: mirror the upper triangle and zero the diagonal imaginary parts.
  for (Eigen::Index i = 0; i < dim; ++i) {
    h(i, i) = h(i, i).real();
    for (Eigen::Index j = i + 1; j < dim; ++j) h(j, i) = std::conj(h(i, j));
  }
  return h;
}

StateVector Rng::orthogonal_state(const StateVector& anchor) {
  if (anchor.dim() < 2)
    throw Error(ErrorKind::invalid_dimension, "no state orthogonal to a one-dimensional anchor");
  for (;;) {
    const StateVector v = haar_state(anchor.dim());
    auto [c, n] = orthogonal_component(anchor, v.vec());
    if (n > 1e-6) return StateVector::normalized(c);
  }
}

StateVector haar_random_state(Eigen::Index dim, Seed seed) { return Rng(seed).haar_state(dim); }

Matrix random_hermitian(Eigen::Index dim, Seed seed, double scale) {
  return Rng(seed).hermitian(dim, scale);
}

}  // namespace wm
