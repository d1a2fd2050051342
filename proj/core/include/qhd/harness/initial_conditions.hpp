#pragma once

#include "qhd/harness/config.hpp"
#include "qhd/physics.hpp"

namespace qhd::harness {

struct InitialCondition {
  WaveState state;
  double mass = 0.0;
  double energy = 0.0;
};

/// psi_0 on `grid` for `spec`:
///   plane_wave  A exp(i k.x), k on the grid
///   gaussian    A prod_a exp(-d_a^2 / (2 sigma^2)) exp(i k.d), d the minimum-image
///               offset from the centre (tails truncated, sigma <= L/12)
///   wkb         sqrt(rho_0) exp(i S_0 / hbar) from two profiles
///   vortex      A (sin(2 pi x/L) + i sin(2 pi y/L))^m, a periodic lattice of four
///               nodes of charge +-m (2D only)
///   zero
/// Throws ConfigError(initial_condition) on a rejected spec.
InitialCondition build_initial_condition(const Grid& grid, const InitialSpec& spec, const PhysicsParams& params);

/// Convenience overload using the config's grid and physics.
InitialCondition build_initial_condition(const RunConfig& config);

}  // namespace qhd::harness
