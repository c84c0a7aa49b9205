#pragma once

#include <cstdint>
#include <random>

#include "weakmeas/linalg.hpp"

namespace wm {

struct Seed {
  std::uint64_t value = 0;
  friend bool operator==(Seed, Seed) = default;
};

/// SplitMix64 finalizer; also the sub-seed derivation rule of the harness.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for one trial, derived from the master seed and the trial coordinates
/// so that any trial can be regenerated without replaying earlier ones.
Seed derive_seed(Seed master, std::uint64_t stream, std::uint64_t index);

/// Deterministic sampler. Identical seeds give bit-identical streams for a
/// given standard library (std::normal_distribution is implementation-defined).
class Rng {
 public:
  explicit Rng(Seed seed) : engine_(seed.value) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  Complex complex_normal();

  StateVector haar_state(Eigen::Index dim);
  Matrix hermitian(Eigen::Index dim, double scale);
  Matrix complex_gaussian(Eigen::Index rows, Eigen::Index cols);
  /// A Haar-distributed state conditioned to be orthogonal to anchor.
  StateVector orthogonal_state(const StateVector& anchor);

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

StateVector haar_random_state(Eigen::Index dim, Seed seed);
Matrix random_hermitian(Eigen::Index dim, Seed seed, double scale = 1.0);

}  // namespace wm
