#pragma once

namespace wm {

// Numerical thresholds shared by every module. The defaults are the library
// contract; the harness may override them per run (CV grids mostly).
struct Tolerances {
  double construction = 1e-12;  // normalization and hermiticity at construction
  double spectral = 1e-10;      // eigen-residuals, projector laws, operator identities
  double relation = 1e-9;       // inequality slack and tightness
  double degeneracy = 1e-9;     // eigenvalue grouping, relative to max(1, |H|)
  double overlap = 1e-10;       // smallest admissible post-selection overlap
  double reality = 1e-10;       // imaginary residue allowed on quantities that must be real
};

inline constexpr Tolerances kDefaultTolerances{};

}  // namespace wm
