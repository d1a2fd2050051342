#pragma once

#include <optional>
#include <string>

#include "qhd/field.hpp"

namespace qhd {

/// Wave function on the grid at time t.
struct WaveState {
  ComplexField psi;
  double t = 0.0;
  double hbar = 1.0;

  const Grid& grid() const noexcept { return psi.grid(); }
};

/// Built-in forms of the extra potential g in the collision term rho grad g.
enum class GKind {
  none,
  density,          ///< g = c * rho
  lambda_smoothed,  ///< g = c * G_w * |Lambda|^2 with G_w a Gaussian low-pass of width w
};

struct GSpec {
  GKind kind = GKind::none;
  double coefficient = 0.0;
  double smoothing_width = 0.0;
};

std::string to_string(GKind kind);
GKind g_kind_from_string(const std::string& name);

/// Material and collision parameters of the QHD system.
struct PhysicsParams {
  double hbar = 1.0;
  /// Nonlinearity / pressure exponent, 1 <= p < 5.
  double p = 1.0;
  /// Collision coefficient of the alpha J term.
  double alpha = 1.0;
  GSpec g;
  std::optional<RealField> doping;
  /// Relaxation time; when set the collision term is (alpha / epsilon) J.
  std::optional<double> epsilon_relax;

  /// Effective collision rate alpha (or alpha / epsilon in relaxation mode).
  double collision_rate() const { return epsilon_relax ? alpha / *epsilon_relax : alpha; }

  /// Throws std::invalid_argument when p is outside [1,5), hbar <= 0, alpha < 0
  /// or epsilon <= 0.
  void validate() const;
};

}  // namespace qhd
